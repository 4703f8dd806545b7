#include <gtest/gtest.h>

#include "support.hpp"

using namespace bron;
using namespace bron::testing;

namespace {

std::string fixture(const std::string& name) { return read_file(std::string(BRON_TEST_DATA) + "/" + name); }

template <class T>
std::vector<T> only(const RecordStream& s) {
    std::vector<T> out;
    for (const auto& r : s)
        if (auto* p = std::get_if<T>(&r)) out.push_back(*p);
    return out;
}

}  // namespace

TEST(Capec, MinimalPattern) {
    const auto s = parse_source(SourceKind::CapecXml, fixture("capec_min.xml"));
    const auto nodes = only<NodeRecord>(s);
    const auto edges = only<EdgeRecord>(s);
    ASSERT_EQ(nodes.size(), 1u);
    ASSERT_EQ(edges.size(), 1u);
    EXPECT_EQ(nodes[0].id(), cap("CAPEC-66"));
    EXPECT_EQ(nodes[0].name, "SQL Injection");
    EXPECT_EQ(edges[0].from(), cap("CAPEC-66"));
    EXPECT_EQ(edges[0].to(), cwe("CWE-89"));
}

TEST(Capec, TaxonomyMappingAndDeprecation) {
    const auto s = parse_source(SourceKind::CapecXml, fixture("capec_mapped.xml"));
    const auto nodes = only<NodeRecord>(s);
    ASSERT_EQ(nodes.size(), 1u);
    EXPECT_EQ(nodes[0].description, "An adversary tries every value.");
    const auto edges = only<EdgeRecord>(s);
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_EQ(edges[2].from(), tech("T1110"));
    EXPECT_EQ(edges[2].to(), cap("CAPEC-112"));
}

TEST(Capec, Errors) {
    EXPECT_THROW(parse_source(SourceKind::CapecXml, "<Attack_Pattern_Catalog><unclosed>"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::CapecXml, "<Other/>"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::CapecXml, R"(<Attack_Pattern_Catalog Version="2.11"/>)"),
                 UnsupportedVersion);
    try {
        parse_source(SourceKind::CapecXml, "<Attack_Pattern_Catalog>\n<a>\n</b>");
        FAIL();
    } catch (const MalformedInput& e) {
        EXPECT_FALSE(e.location().empty());
    }
}

TEST(Cwe, WeaknessWithReferences) {
    const auto s = parse_source(SourceKind::CweXml, fixture("cwe_min.xml"));
    const auto nodes = only<NodeRecord>(s);
    const auto edges = only<EdgeRecord>(s);
    ASSERT_EQ(nodes.size(), 1u);
    EXPECT_EQ(nodes[0].id(), cwe("CWE-89"));
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(edges[0].from(), cap("CAPEC-66"));
    EXPECT_EQ(edges[1].to(), cve("CVE-2021-0001"));
}

TEST(Nvd, OneCveTwoProducts) {
    const auto s = parse_source(SourceKind::NvdCveJson, fixture("nvd_min.json"));
    const auto nodes = only<NodeRecord>(s);
    const auto edges = only<EdgeRecord>(s);
    ASSERT_EQ(nodes.size(), 3u);
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(nodes[0].id(), cve("CVE-2021-0001"));
    ASSERT_TRUE(nodes[0].cvss);
    EXPECT_DOUBLE_EQ(*nodes[0].cvss, 4.6);  // v3 wins over v2
    for (const auto& e : edges) {
        EXPECT_EQ(e.from_layer, Layer::Vulnerability);
        EXPECT_EQ(e.to_layer, Layer::ProductConfig);
    }
}

TEST(Nvd, Versions) {
    EXPECT_THROW(parse_source(SourceKind::NvdCveJson, R"({"vulnerabilities": []})"), UnsupportedVersion);
    EXPECT_THROW(parse_source(SourceKind::NvdCveJson, R"({"CVE_data_version": "5.0", "CVE_Items": []})"),
                 UnsupportedVersion);
    EXPECT_THROW(parse_source(SourceKind::NvdCveJson, R"({"CVE_Items": [{"cve": {}}]})"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::NvdCveJson, "{not json"), MalformedInput);
}

TEST(Attack, TacticsTechniquesAndSubtechniques) {
    const auto s = parse_source(SourceKind::AttackJson, fixture("attack_min.json"));
    auto [g, rep] = load_graph({s});
    EXPECT_EQ(g.node_count(), 3u);  // revoked technique dropped
    EXPECT_TRUE(g.contains(tac("TA0006")));
    const std::vector<NodeId> members{tech("T1110"), tech("T1110.001")};
    EXPECT_EQ(g.neighbors(tac("TA0006"), Direction::Down), members);
    EXPECT_EQ(g.neighbors(tech("T1110"), Direction::Down), std::vector<NodeId>{tech("T1110.001")});
    EXPECT_EQ(rep.dangling_edges, 1u);  // CAPEC-49 not loaded
    EXPECT_EQ(g.edge_count(), 3u);
}

TEST(Attack, Errors) {
    EXPECT_THROW(parse_source(SourceKind::AttackJson, R"({"type": "bundle"})"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::AttackJson, R"({"type": "bundle", "spec_version": "3.0", "objects": []})"),
                 UnsupportedVersion);
}

TEST(Canonical, EmptyFile) {
    EXPECT_TRUE(parse_source(SourceKind::CanonicalJsonl, "").empty());
    EXPECT_EQ(export_canonical(load_graph({RecordStream{}}).graph), "");
}

TEST(Canonical, BadLines) {
    EXPECT_THROW(parse_source(SourceKind::CanonicalJsonl, "{\"t\":\"node\"}\n"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::CanonicalJsonl, "{\"t\":\"what\"}\n"), MalformedInput);
    EXPECT_THROW(parse_source(SourceKind::CanonicalJsonl,
                              R"({"t":"node","layer":"tactic","id":"x","cvss":"high"})"),
                 MalformedInput);
    try {
        parse_source(SourceKind::CanonicalJsonl, "\n\n{oops\n");
        FAIL();
    } catch (const MalformedInput& e) {
        EXPECT_EQ(e.location(), "line 3");
    }
}

TEST(Canonical, ExactLineFormat) {
    ThreatGraph g;
    add(g, cwe("CWE-79"), "XSS");
    add(g, cve("CVE-1"), "", 6.1);
    g.add_edge(cwe("CWE-79"), cve("CVE-1"));
    g.freeze();
    EXPECT_EQ(export_canonical(g),
              "{\"t\":\"node\",\"layer\":\"weakness\",\"id\":\"CWE-79\",\"name\":\"XSS\",\"desc\":\"\",\"cvss\":null}\n"
              "{\"t\":\"node\",\"layer\":\"vulnerability\",\"id\":\"CVE-1\",\"name\":\"\",\"desc\":\"\",\"cvss\":6.1}\n"
              "{\"t\":\"edge\",\"a_layer\":\"weakness\",\"a\":\"CWE-79\",\"b_layer\":\"vulnerability\",\"b\":\"CVE-1\"}\n");
}

TEST(Load, DuplicatesAndDangling) {
    RecordStream a{NodeRecord{Layer::Weakness, "CWE-79", "XSS", "", std::nullopt}};
    RecordStream b{NodeRecord{Layer::Weakness, "CWE-79", "", "filled later", std::nullopt},
                   EdgeRecord{Layer::Weakness, "CWE-79", Layer::Vulnerability, "CVE-404"}};
    auto [g, rep] = load_graph({a, b});
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(rep.duplicates_merged, 1u);
    EXPECT_EQ(rep.dangling_edges, 1u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(g.node(cwe("CWE-79")).name, "XSS");
    EXPECT_EQ(g.node(cwe("CWE-79")).description, "filled later");
    EXPECT_TRUE(g.frozen());
}

TEST(Load, RejectsNonAdjacentAndInvalid) {
    RecordStream s{NodeRecord{Layer::Tactic, "TA1", "t", "", std::nullopt},
                   NodeRecord{Layer::Weakness, "CWE-1", "w", "", std::nullopt},
                   NodeRecord{Layer::Weakness, "CWE-2", "", "", std::nullopt},
                   EdgeRecord{Layer::Tactic, "TA1", Layer::Weakness, "CWE-1"}};
    auto [g, rep] = load_graph({s});
    EXPECT_EQ(rep.rejected_edges, 1u);
    EXPECT_EQ(rep.invalid_nodes, 1u);
    EXPECT_EQ(g.node_count(), 2u);
}

TEST(Load, SourcesJoinAcrossFiles) {
    auto [g, rep] = load_graph({parse_source(SourceKind::CapecXml, fixture("capec_min.xml")),
                                parse_source(SourceKind::CweXml, fixture("cwe_min.xml")),
                                parse_source(SourceKind::NvdCveJson, fixture("nvd_min.json"))});
    EXPECT_EQ(g.node_count(), 5u);
    EXPECT_EQ(rep.dangling_edges, 0u);
    EXPECT_EQ(g.edge_count(), 4u);  // CAPEC-CWE stated twice, CWE-CVE, two CVE-CPE
    EXPECT_EQ(g.reachable(cap("CAPEC-66"), Layer::ProductConfig).size(), 2u);
}

TEST(Load, DeskFixtureCountsMatchRecordScan) {
    const auto desk = desk_fixture();
    RecordStream s;
    for (const auto& id : desk.node_ids()) {
        const auto& n = desk.node(id);
        s.push_back(NodeRecord{id.layer, id.local_id, n.name, n.description, n.cvss});
    }
    for (const auto& [a, b] : desk.edges()) s.push_back(EdgeRecord{b.layer, b.local_id, a.layer, a.local_id});
    RecordStream again = s;
    auto [g, rep] = load_graph({s, again});

    std::set<NodeId> distinct_nodes;
    std::set<std::pair<NodeId, NodeId>> distinct_edges;
    for (const auto& r : s) {
        if (auto* n = std::get_if<NodeRecord>(&r)) distinct_nodes.insert(n->id());
        if (auto* e = std::get_if<EdgeRecord>(&r)) distinct_edges.insert(std::minmax(e->from(), e->to()));
    }
    EXPECT_EQ(g.node_count(), distinct_nodes.size());
    EXPECT_EQ(g.edge_count(), distinct_edges.size());
    EXPECT_EQ(rep.duplicates_merged, distinct_nodes.size());
    const auto text = export_canonical(g);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 18);
    EXPECT_EQ(text, export_canonical(desk));
}

TEST(Canonical, RoundTripRandomGraphs) {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto g = random_graph(seed);
        const std::string text = export_canonical(g);
        const auto back = load_graph({parse_source(SourceKind::CanonicalJsonl, text)}).graph;
        ASSERT_EQ(back.node_ids(), g.node_ids());
        for (const auto& id : g.node_ids()) EXPECT_EQ(back.node(id), g.node(id));
        ASSERT_EQ(back.edges(), g.edges());
        EXPECT_EQ(export_canonical(back), text);
    }
}

TEST(Canonical, ExportIgnoresInsertionOrder) {
    const auto g = random_graph(7, 200, false);
    auto records = parse_source(SourceKind::CanonicalJsonl, export_canonical(g));
    std::reverse(records.begin(), records.end());
    EXPECT_EQ(export_canonical(load_graph({records}).graph), export_canonical(g));
}
