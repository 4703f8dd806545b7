#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace bron;
using namespace bron::testing;

TEST(WeaknessReport, TwoVulnerabilities) {
    ThreatGraph g;
    add(g, cwe("CWE-1"), "w");
    add(g, cve("CVE-1"), "", 4.0);
    add(g, cve("CVE-2"), "", 6.0);
    add(g, cpe("cpe:a"), "");
    g.add_edge(cwe("CWE-1"), cve("CVE-1"));
    g.add_edge(cwe("CWE-1"), cve("CVE-2"));
    g.add_edge(cve("CVE-1"), cpe("cpe:a"));
    g.add_edge(cve("CVE-2"), cpe("cpe:a"));
    g.freeze();
    const auto r = weakness_report(g, "CWE-1");
    EXPECT_EQ(r.n_vulnerabilities, 2u);
    EXPECT_EQ(r.n_product_configs, 1u);
    EXPECT_DOUBLE_EQ(r.sum_cvss, 10.0);
    ASSERT_TRUE(r.avg_cvss);
    EXPECT_DOUBLE_EQ(*r.avg_cvss, 5.0);
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(weakness_csv({r}), std::string(kWeaknessCsvHeader) + "\nCWE-1,w,0,0,0,2,10.00,5.00,1\n");
}

TEST(WeaknessReport, IsolatedAndUnknown) {
    const auto g = desk_fixture();
    const auto r = weakness_report(g, "20");
    EXPECT_EQ(r.n_tactics + r.n_techniques + r.n_attack_patterns + r.n_vulnerabilities + r.n_product_configs, 0u);
    EXPECT_FALSE(r.avg_cvss);
    EXPECT_EQ(weakness_csv({r}).substr(std::string(kWeaknessCsvHeader).size() + 1),
              "20,Improper Input Validation,0,0,0,0,0.00,,0\n");
    EXPECT_THROW(weakness_report(g, "999"), UnknownNode);
}

TEST(WeaknessReport, DeskDiamond) {
    const auto r = weakness_report(desk_fixture(), "10");
    EXPECT_EQ(r.n_tactics, 1u);
    EXPECT_EQ(r.n_techniques, 2u);
    EXPECT_EQ(r.n_attack_patterns, 2u);
    EXPECT_EQ(r.n_vulnerabilities, 1u);
    EXPECT_DOUBLE_EQ(r.sum_cvss, 5.0);
}

TEST(WeaknessReport, MissingCvssWarns) {
    ThreatGraph g;
    add(g, cwe("CWE-1"), "w");
    add(g, cve("CVE-1"), "", 8.0);
    add(g, cve("CVE-2"), "");
    g.add_edge(cwe("CWE-1"), cve("CVE-1"));
    g.add_edge(cwe("CWE-1"), cve("CVE-2"));
    g.freeze();
    const auto r = weakness_report(g, "CWE-1");
    EXPECT_EQ(r.missing_cvss, 1u);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_DOUBLE_EQ(*r.avg_cvss, 4.0);
}

TEST(WeaknessReport, MatchesOracleOnRandomGraphs) {
    for (std::uint64_t s = 200; s < 220; ++s) {
        const auto g = random_graph(s);
        const auto el = edge_list_of(g);
        for (const auto& id : g.nodes_in(Layer::Weakness)) {
            const auto r = weakness_report(g, id.local_id);
            const auto o = oracle_weakness(el, id);
            EXPECT_EQ(r.n_tactics, o.counts[0]);
            EXPECT_EQ(r.n_techniques, o.counts[1]);
            EXPECT_EQ(r.n_attack_patterns, o.counts[2]);
            EXPECT_EQ(r.n_vulnerabilities, o.counts[4]);
            EXPECT_EQ(r.n_product_configs, o.counts[5]);
            EXPECT_NEAR(r.sum_cvss, o.sum_cvss, 1e-9);
            if (r.n_vulnerabilities) {
                EXPECT_NEAR(*r.avg_cvss * static_cast<double>(r.n_vulnerabilities), r.sum_cvss, 1e-9);
            }
        }
    }
}

TEST(Connectivity, LargeSparseFixture) {
    const auto s = connectivity_stats(connectivity_fixture(666, 740, 157));
    EXPECT_EQ(s.possible_pairs, 492840u);
    EXPECT_EQ(s.linked_pairs, 157u);
    EXPECT_EQ(format_density(s), "0.032%");
}

TEST(Connectivity, UnlinkedShare) {
    const auto s = connectivity_stats(connectivity_fixture(100, 30, 26));
    EXPECT_DOUBLE_EQ(s.pct_unlinked_techniques, 74.0);
}

TEST(Connectivity, EmptyGraph) {
    const auto s = connectivity_stats(ThreatGraph{});
    EXPECT_EQ(s.possible_pairs, 0u);
    EXPECT_FALSE(s.density_defined);
    EXPECT_EQ(format_density(s), "0.000%");
}

TEST(Connectivity, RelabelInvariant) {
    const auto a = connectivity_stats(connectivity_fixture(50, 40, 20));
    ThreatGraph g;
    for (std::size_t i = 0; i < 50; ++i) add(g, tech("X" + std::to_string(49 - i)), "t");
    for (std::size_t j = 0; j < 40; ++j) add(g, cap("Y" + std::to_string(j * 7)), "c");
    for (std::size_t e = 0; e < 20; ++e) g.add_edge(tech("X" + std::to_string(49 - e)), cap("Y" + std::to_string(e * 7)));
    EXPECT_EQ(connectivity_stats(g).density_percent, a.density_percent);
}

TEST(Frequency, SingleRoot) {
    const auto g = desk_fixture();
    const auto t = frequency_table(g, {cwe("10")}, Layer::Technique, 10);
    ASSERT_EQ(t.size(), 2u);
    for (const auto& [id, n] : t) EXPECT_EQ(n, 1u);
    EXPECT_THROW(frequency_table(g, {cwe("10")}, Layer::Technique, 0), InvalidConfig);
}

TEST(Frequency, SharedVulnerabilityRanksFirst) {
    ThreatGraph g;
    for (int i = 1; i <= 5; ++i) add(g, cwe("CWE-" + std::to_string(i)), "w");
    add(g, cve("CVE-X"), "", 5.0);
    add(g, cve("CVE-A"), "", 5.0);
    add(g, cve("CVE-B"), "", 5.0);
    for (int i : {1, 3, 5}) g.add_edge(cwe("CWE-" + std::to_string(i)), cve("CVE-X"));
    g.add_edge(cwe("CWE-2"), cve("CVE-A"));
    g.add_edge(cwe("CWE-4"), cve("CVE-B"));
    g.add_edge(cwe("CWE-3"), cve("CVE-B"));
    g.freeze();
    std::vector<NodeId> roots;
    for (int i = 1; i <= 5; ++i) roots.push_back(cwe("CWE-" + std::to_string(i)));
    const auto t = frequency_table(g, roots, Layer::Vulnerability, 3);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0], std::make_pair(cve("CVE-X"), std::size_t{3}));
    EXPECT_EQ(t[1], std::make_pair(cve("CVE-B"), std::size_t{2}));
    EXPECT_EQ(t[2], std::make_pair(cve("CVE-A"), std::size_t{1}));
}

TEST(Ngrams, Bigrams) {
    const auto t = ngram_frequency({"Buffer Overflow", "buffer overflow attack"}, 2, 5);
    ASSERT_FALSE(t.empty());
    EXPECT_EQ(t[0], std::make_pair(std::string("buffer overflow"), std::size_t{2}));
    const std::vector<std::pair<std::string, std::size_t>> abc{{"a b", 1}, {"b c", 1}};
    EXPECT_EQ(ngram_frequency({"a b c"}, 2, 10), abc);
    EXPECT_TRUE(ngram_frequency({}, 1, 10).empty());
    EXPECT_THROW(ngram_frequency({"x"}, 3, 10), InvalidConfig);
}

TEST(Ngrams, CountsSumToWindowCount) {
    const std::vector<std::string> texts{"one two three", "", "a-b_c d", "single"};
    for (int n : {1, 2}) {
        std::size_t want = 0;
        for (const auto& t : texts) {
            const auto k = tokenize(t).size();
            want += k >= static_cast<std::size_t>(n) ? k - static_cast<std::size_t>(n) + 1 : 0;
        }
        const auto got = ngram_frequency(texts, n, 1000);
        std::size_t sum = 0;
        for (const auto& [g, c] : got) sum += c;
        EXPECT_EQ(sum, want);
    }
}

TEST(Csv, QuotesFields) {
    WeaknessReport r;
    r.cwe_id = "CWE-89";
    r.name = "SQL \"Injection\", classic";
    EXPECT_NE(weakness_csv({r}).find("\"SQL \"\"Injection\"\", classic\""), std::string::npos);
}
