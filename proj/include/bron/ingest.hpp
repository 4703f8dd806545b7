#pragma once
// Source adapters and the canonical JSON Lines interchange format.
//
// Each adapter reads a documented subset of one public feed:
//   AttackJson     STIX 2.x bundle (enterprise-attack.json): tactics,
//                  techniques, tactic membership, sub-technique parents,
//                  CAPEC external references.
//   CapecXml       CAPEC 3.x catalog: patterns, Related_Weaknesses,
//                  ATT&CK taxonomy mappings.
//   CweXml         CWE 3.x/4.x catalog: weaknesses, Related_Attack_Patterns,
//                  Observed_Examples CVE references.
//   NvdCveJson     NVD 1.1 JSON feed (CVE_data_version 4.0): CVE text,
//                  base score (v3 preferred over v2), problemtype CWEs,
//                  vulnerable CPE URIs.
//   CanonicalJsonl one node or edge object per line.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bron/error.hpp"
#include "bron/graph.hpp"
#include "json.hpp"

namespace bron {

struct NodeRecord {
    Layer layer = Layer::Tactic;
    std::string local_id;
    std::string name;
    std::string description;
    std::optional<double> cvss;

    NodeId id() const { return {layer, local_id}; }
    friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct EdgeRecord {
    Layer from_layer = Layer::Tactic;
    std::string from_id;
    Layer to_layer = Layer::Tactic;
    std::string to_id;

    NodeId from() const { return {from_layer, from_id}; }
    NodeId to() const { return {to_layer, to_id}; }
    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

using Record = std::variant<NodeRecord, EdgeRecord>;
using RecordStream = std::vector<Record>;

enum class SourceKind { AttackJson, CapecXml, CweXml, NvdCveJson, CanonicalJsonl };

inline std::optional<SourceKind> parse_source_kind(std::string_view s) {
    if (s == "attack") return SourceKind::AttackJson;
    if (s == "capec") return SourceKind::CapecXml;
    if (s == "cwe") return SourceKind::CweXml;
    if (s == "nvd") return SourceKind::NvdCveJson;
    if (s == "canonical") return SourceKind::CanonicalJsonl;
    return std::nullopt;
}

namespace detail {

using nlohmann::json;
namespace pt = boost::property_tree;

/// Collects records and drops exact duplicate edges within one file.
class StreamBuilder {
public:
    void node(NodeRecord n) { out_.emplace_back(std::move(n)); }

    void edge(Layer fl, std::string fid, Layer tl, std::string tid) {
        auto key = std::make_tuple(fl, fid, tl, tid);
        if (!seen_.insert(key).second) return;
        out_.emplace_back(EdgeRecord{fl, std::move(fid), tl, std::move(tid)});
    }

    RecordStream take() && { return std::move(out_); }

private:
    RecordStream out_;
    std::set<std::tuple<Layer, std::string, Layer, std::string>> seen_;
};

inline json parse_json_document(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw MalformedInput(e.what(), "byte " + std::to_string(e.byte));
    }
}

inline std::string json_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return {};
    return it->get<std::string>();
}

inline bool json_true(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it != obj.end() && it->is_boolean() && it->get<bool>();
}

// ---------------------------------------------------------------- ATT&CK

inline RecordStream parse_attack(std::string_view bytes) {
    const json doc = parse_json_document(bytes);
    if (!doc.is_object() || json_string(doc, "type") != "bundle")
        throw MalformedInput("expected a STIX bundle object", "$");
    if (auto v = json_string(doc, "spec_version"); !v.empty() && v != "2.0" && v != "2.1")
        throw UnsupportedVersion("STIX spec_version " + v);
    auto objs = doc.find("objects");
    if (objs == doc.end() || !objs->is_array()) throw MalformedInput("missing objects array", "$.objects");

    auto attack_id = [](const json& o) -> std::string {
        auto refs = o.find("external_references");
        if (refs == o.end() || !refs->is_array()) return {};
        for (const auto& r : *refs)
            if (json_string(r, "source_name") == "mitre-attack") return json_string(r, "external_id");
        return {};
    };

    StreamBuilder out;
    std::multimap<std::string, std::string> tactic_by_shortname;
    std::unordered_map<std::string, std::string> technique_by_stix;
    struct Pending {
        std::string technique;
        std::vector<std::string> phases;
        std::vector<std::string> capecs;
        bool subtechnique;
    };
    std::vector<Pending> pending;
    std::vector<std::pair<std::string, std::string>> sub_of;  // (child stix, parent stix)

    for (std::size_t i = 0; i < objs->size(); ++i) {
        const json& o = (*objs)[i];
        if (!o.is_object()) throw MalformedInput("object is not a JSON object", "$.objects[" + std::to_string(i) + "]");
        const std::string type = json_string(o, "type");
        if (auto v = json_string(o, "spec_version"); !v.empty() && v != "2.0" && v != "2.1")
            throw UnsupportedVersion("STIX spec_version " + v);
        if (json_true(o, "revoked") || json_true(o, "x_mitre_deprecated")) continue;

        if (type == "x-mitre-tactic") {
            const std::string id = attack_id(o);
            if (id.empty()) continue;
            out.node({Layer::Tactic, id, json_string(o, "name"), json_string(o, "description"), std::nullopt});
            tactic_by_shortname.emplace(json_string(o, "x_mitre_shortname"), id);
        } else if (type == "attack-pattern") {
            const std::string id = attack_id(o);
            if (id.empty()) continue;
            out.node({Layer::Technique, id, json_string(o, "name"), json_string(o, "description"), std::nullopt});
            technique_by_stix.emplace(json_string(o, "id"), id);
            Pending p{id, {}, {}, json_true(o, "x_mitre_is_subtechnique")};
            if (auto k = o.find("kill_chain_phases"); k != o.end() && k->is_array())
                for (const auto& ph : *k)
                    if (json_string(ph, "kill_chain_name").starts_with("mitre"))
                        p.phases.push_back(json_string(ph, "phase_name"));
            if (auto refs = o.find("external_references"); refs != o.end() && refs->is_array())
                for (const auto& r : *refs)
                    if (json_string(r, "source_name") == "capec") {
                        const std::string cid = json_string(r, "external_id");
                        if (cid.starts_with("CAPEC-")) p.capecs.push_back(cid);
                    }
            pending.push_back(std::move(p));
        } else if (type == "relationship" && json_string(o, "relationship_type") == "subtechnique-of") {
            sub_of.emplace_back(json_string(o, "source_ref"), json_string(o, "target_ref"));
        }
    }

    for (const auto& p : pending) {
        for (const auto& phase : p.phases) {
            auto [lo, hi] = tactic_by_shortname.equal_range(phase);
            for (auto it = lo; it != hi; ++it) out.edge(Layer::Tactic, it->second, Layer::Technique, p.technique);
        }
        for (const auto& c : p.capecs) out.edge(Layer::Technique, p.technique, Layer::AttackPattern, c);
        if (p.subtechnique) {
            if (auto dot = p.technique.find('.'); dot != std::string::npos)
                out.edge(Layer::Technique, p.technique.substr(0, dot), Layer::Technique, p.technique);
        }
    }
    for (const auto& [child, parent] : sub_of) {
        auto c = technique_by_stix.find(child);
        auto p = technique_by_stix.find(parent);
        if (c != technique_by_stix.end() && p != technique_by_stix.end())
            out.edge(Layer::Technique, p->second, Layer::Technique, c->second);
    }
    return std::move(out).take();
}

// ---------------------------------------------------------------- XML helpers

inline pt::ptree parse_xml_document(std::string_view bytes) {
    pt::ptree tree;
    std::istringstream in{std::string(bytes)};
    try {
        pt::read_xml(in, tree, pt::xml_parser::no_concat_text);
    } catch (const pt::xml_parser_error& e) {
        throw MalformedInput(e.message(), "line " + std::to_string(e.line()));
    }
    return tree;
}

inline std::string xml_attr(const pt::ptree& node, const char* name) {
    if (auto attrs = node.get_child_optional("<xmlattr>"))
        if (auto v = attrs->get_optional<std::string>(name)) return *v;
    return {};
}

/// Text content of an element. Text runs and child elements are joined in
/// document order with single spaces.
inline std::string xml_text(const pt::ptree& node) {
    auto trimmed = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    std::string out;
    auto append = [&](const std::string& t) {
        if (t.empty()) return;
        if (!out.empty()) out += ' ';
        out += t;
    };
    append(trimmed(node.data()));
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        append(key == "<xmltext>" ? trimmed(child.data()) : xml_text(child));
    }
    return out;
}

inline std::optional<std::string> xml_child_text(const pt::ptree& node, const char* name) {
    auto c = node.get_child_optional(name);
    if (!c) return std::nullopt;
    return xml_text(*c);
}

inline void check_catalog_version(const pt::ptree& root, const char* catalog, std::initializer_list<char> majors) {
    const std::string v = xml_attr(root, "Version");
    if (v.empty()) return;
    if (std::find(majors.begin(), majors.end(), v.front()) == majors.end() ||
        (v.size() > 1 && v[1] != '.'))
        throw UnsupportedVersion(std::string(catalog) + " version " + v);
}

inline const pt::ptree& xml_root(const pt::ptree& doc, const char* name) {
    auto root = doc.get_child_optional(name);
    if (!root) throw MalformedInput(std::string("missing root element ") + name, "/");
    return *root;
}

// ---------------------------------------------------------------- CAPEC

inline RecordStream parse_capec(std::string_view bytes) {
    const pt::ptree doc = parse_xml_document(bytes);
    const pt::ptree& root = xml_root(doc, "Attack_Pattern_Catalog");
    check_catalog_version(root, "CAPEC", {'3'});

    StreamBuilder out;
    std::vector<EdgeRecord> edges;
    auto patterns = root.get_child_optional("Attack_Patterns");
    if (!patterns) return std::move(out).take();
    for (const auto& [tag, ap] : *patterns) {
        if (tag != "Attack_Pattern") continue;
        const std::string raw_id = xml_attr(ap, "ID");
        if (raw_id.empty())
            throw MalformedInput("Attack_Pattern without ID", "/Attack_Pattern_Catalog/Attack_Patterns/Attack_Pattern");
        if (xml_attr(ap, "Status") == "Deprecated") continue;
        const std::string id = "CAPEC-" + raw_id;
        std::string desc;
        if (auto d = ap.get_child_optional("Description")) desc = xml_text(*d);
        out.node({Layer::AttackPattern, id, xml_attr(ap, "Name"), desc, std::nullopt});

        if (auto rw = ap.get_child_optional("Related_Weaknesses"))
            for (const auto& [t, w] : *rw)
                if (t == "Related_Weakness")
                    if (auto cwe = xml_attr(w, "CWE_ID"); !cwe.empty())
                        edges.push_back({Layer::AttackPattern, id, Layer::Weakness, "CWE-" + cwe});
        if (auto tm = ap.get_child_optional("Taxonomy_Mappings"))
            for (const auto& [t, m] : *tm) {
                if (t != "Taxonomy_Mapping" || xml_attr(m, "Taxonomy_Name") != "ATTACK") continue;
                auto entry = xml_child_text(m, "Entry_ID");
                if (!entry || entry->empty()) continue;
                std::string tid = *entry;
                tid.erase(std::remove_if(tid.begin(), tid.end(), [](unsigned char c) { return std::isspace(c); }),
                          tid.end());
                if (!tid.starts_with('T')) tid = "T" + tid;
                edges.push_back({Layer::Technique, tid, Layer::AttackPattern, id});
            }
    }
    for (auto& e : edges) out.edge(e.from_layer, std::move(e.from_id), e.to_layer, std::move(e.to_id));
    return std::move(out).take();
}

// ---------------------------------------------------------------- CWE

inline RecordStream parse_cwe(std::string_view bytes) {
    const pt::ptree doc = parse_xml_document(bytes);
    const pt::ptree& root = xml_root(doc, "Weakness_Catalog");
    check_catalog_version(root, "CWE", {'3', '4'});

    StreamBuilder out;
    std::vector<EdgeRecord> edges;
    auto weaknesses = root.get_child_optional("Weaknesses");
    if (!weaknesses) return std::move(out).take();
    for (const auto& [tag, w] : *weaknesses) {
        if (tag != "Weakness") continue;
        const std::string raw_id = xml_attr(w, "ID");
        if (raw_id.empty()) throw MalformedInput("Weakness without ID", "/Weakness_Catalog/Weaknesses/Weakness");
        if (xml_attr(w, "Status") == "Deprecated") continue;
        const std::string id = "CWE-" + raw_id;
        std::string desc;
        if (auto d = w.get_child_optional("Description")) desc = xml_text(*d);
        out.node({Layer::Weakness, id, xml_attr(w, "Name"), desc, std::nullopt});

        if (auto rap = w.get_child_optional("Related_Attack_Patterns"))
            for (const auto& [t, r] : *rap)
                if (t == "Related_Attack_Pattern")
                    if (auto c = xml_attr(r, "CAPEC_ID"); !c.empty())
                        edges.push_back({Layer::AttackPattern, "CAPEC-" + c, Layer::Weakness, id});
        if (auto obs = w.get_child_optional("Observed_Examples"))
            for (const auto& [t, ex] : *obs) {
                if (t != "Observed_Example") continue;
                auto ref = xml_child_text(ex, "Reference");
                if (ref && ref->starts_with("CVE-")) edges.push_back({Layer::Weakness, id, Layer::Vulnerability, *ref});
            }
    }
    for (auto& e : edges) out.edge(e.from_layer, std::move(e.from_id), e.to_layer, std::move(e.to_id));
    return std::move(out).take();
}

// ---------------------------------------------------------------- NVD

inline void collect_cpes(const json& node, std::vector<std::string>& out) {
    if (auto m = node.find("cpe_match"); m != node.end() && m->is_array())
        for (const auto& c : *m) {
            auto v = c.find("vulnerable");
            if (v != c.end() && v->is_boolean() && !v->get<bool>()) continue;
            if (auto uri = json_string(c, "cpe23Uri"); !uri.empty()) out.push_back(uri);
        }
    if (auto ch = node.find("children"); ch != node.end() && ch->is_array())
        for (const auto& c : *ch) collect_cpes(c, out);
}

inline std::optional<double> nvd_base_score(const json& item) {
    auto impact = item.find("impact");
    if (impact == item.end() || !impact->is_object()) return std::nullopt;
    for (auto [metric, inner] : {std::pair{"baseMetricV3", "cvssV3"}, std::pair{"baseMetricV2", "cvssV2"}}) {
        auto m = impact->find(metric);
        if (m == impact->end()) continue;
        auto c = m->find(inner);
        if (c == m->end()) continue;
        auto s = c->find("baseScore");
        if (s != c->end() && s->is_number()) return s->get<double>();
    }
    return std::nullopt;
}

inline RecordStream parse_nvd(std::string_view bytes) {
    const json doc = parse_json_document(bytes);
    if (!doc.is_object()) throw MalformedInput("expected a JSON object", "$");
    if (doc.contains("vulnerabilities") && !doc.contains("CVE_Items"))
        throw UnsupportedVersion("NVD API 2.0 documents are not supported; use the 1.1 JSON feed");
    if (auto v = json_string(doc, "CVE_data_version"); !v.empty() && v != "4.0")
        throw UnsupportedVersion("CVE_data_version " + v);
    auto items = doc.find("CVE_Items");
    if (items == doc.end() || !items->is_array()) throw MalformedInput("missing CVE_Items array", "$.CVE_Items");

    static const std::regex cwe_re("CWE-[0-9]+");
    StreamBuilder out;
    std::set<std::string> products_seen;
    std::vector<EdgeRecord> edges;

    for (std::size_t i = 0; i < items->size(); ++i) {
        const json& item = (*items)[i];
        const std::string path = "$.CVE_Items[" + std::to_string(i) + "]";
        const std::string id = item.value(json::json_pointer("/cve/CVE_data_meta/ID"), std::string{});
        if (id.empty()) throw MalformedInput("missing cve.CVE_data_meta.ID", path);

        std::string desc;
        if (auto dd = item.find("cve"); dd != item.end()) {
            const json& descs = dd->value(json::json_pointer("/description/description_data"), json::array());
            for (const auto& d : descs)
                if (json_string(d, "lang") == "en" || desc.empty()) {
                    desc = json_string(d, "value");
                    if (json_string(d, "lang") == "en") break;
                }
            const json& pts = dd->value(json::json_pointer("/problemtype/problemtype_data"), json::array());
            for (const auto& p : pts)
                if (auto ds = p.find("description"); ds != p.end() && ds->is_array())
                    for (const auto& d : *ds) {
                        const std::string v = json_string(d, "value");
                        if (std::regex_match(v, cwe_re)) edges.push_back({Layer::Weakness, v, Layer::Vulnerability, id});
                    }
        }
        out.node({Layer::Vulnerability, id, id, desc, nvd_base_score(item)});

        std::vector<std::string> cpes;
        const json& nodes = item.value(json::json_pointer("/configurations/nodes"), json::array());
        for (const auto& n : nodes) collect_cpes(n, cpes);
        for (const auto& uri : cpes) {
            if (products_seen.insert(uri).second) out.node({Layer::ProductConfig, uri, uri, {}, std::nullopt});
            edges.push_back({Layer::Vulnerability, id, Layer::ProductConfig, uri});
        }
    }
    for (auto& e : edges) out.edge(e.from_layer, std::move(e.from_id), e.to_layer, std::move(e.to_id));
    return std::move(out).take();
}

// ---------------------------------------------------------------- canonical

inline Layer require_layer(const json& line, const char* key, const std::string& where) {
    auto l = parse_layer(json_string(line, key));
    if (!l) throw MalformedInput(std::string("bad or missing '") + key + "'", where);
    return *l;
}

inline std::string require_string(const json& line, const char* key, const std::string& where) {
    auto it = line.find(key);
    if (it == line.end() || !it->is_string()) throw MalformedInput(std::string("missing string '") + key + "'", where);
    return it->get<std::string>();
}

inline RecordStream parse_canonical(std::string_view bytes) {
    RecordStream out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) nl = bytes.size();
        std::string_view text = bytes.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
        if (text.find_first_not_of(" \t") == std::string_view::npos) continue;

        const std::string where = "line " + std::to_string(line_no);
        json line;
        try {
            line = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            throw MalformedInput(e.what(), where);
        }
        if (!line.is_object()) throw MalformedInput("record is not an object", where);
        const std::string t = json_string(line, "t");
        if (t == "node") {
            NodeRecord n;
            n.layer = require_layer(line, "layer", where);
            n.local_id = require_string(line, "id", where);
            n.name = json_string(line, "name");
            n.description = json_string(line, "desc");
            if (auto c = line.find("cvss"); c != line.end() && !c->is_null()) {
                if (!c->is_number()) throw MalformedInput("cvss must be a number or null", where);
                n.cvss = c->get<double>();
            }
            out.emplace_back(std::move(n));
        } else if (t == "edge") {
            out.emplace_back(EdgeRecord{require_layer(line, "a_layer", where), require_string(line, "a", where),
                                        require_layer(line, "b_layer", where), require_string(line, "b", where)});
        } else {
            throw MalformedInput("unknown record type '" + t + "'", where);
        }
    }
    return out;
}

}  // namespace detail

inline RecordStream parse_source(SourceKind kind, std::string_view bytes) {
    switch (kind) {
        case SourceKind::AttackJson: return detail::parse_attack(bytes);
        case SourceKind::CapecXml: return detail::parse_capec(bytes);
        case SourceKind::CweXml: return detail::parse_cwe(bytes);
        case SourceKind::NvdCveJson: return detail::parse_nvd(bytes);
        case SourceKind::CanonicalJsonl: return detail::parse_canonical(bytes);
    }
    throw Error("unknown source kind");
}

struct LoadReport {
    std::size_t nodes_added = 0;
    std::size_t edges_added = 0;
    std::size_t dangling_edges = 0;
    std::size_t duplicates_merged = 0;
    std::size_t rejected_edges = 0;  // endpoints exist but layers are not adjacent
    std::size_t invalid_nodes = 0;
    std::vector<EdgeRecord> dangling;
};

struct LoadResult {
    ThreatGraph graph;
    LoadReport report;
};

/// Merges record streams into one frozen graph. Node records are applied
/// before edge records so stream order never produces spurious danglers.
/// Duplicate nodes keep the first record; later ones only fill empty fields.
inline LoadResult load_graph(std::span<const RecordStream> streams) {
    LoadResult result;
    auto& rep = result.report;

    std::unordered_map<NodeId, std::size_t, NodeIdHash> slot;
    std::vector<ThreatNode> merged;
    for (const auto& s : streams)
        for (const auto& rec : s) {
            const auto* n = std::get_if<NodeRecord>(&rec);
            if (!n) continue;
            auto [it, inserted] = slot.try_emplace(n->id(), merged.size());
            if (inserted) {
                merged.push_back({n->id(), n->name, n->description, n->cvss});
                continue;
            }
            ++rep.duplicates_merged;
            ThreatNode& first = merged[it->second];
            if (first.name.empty()) first.name = n->name;
            if (first.description.empty()) first.description = n->description;
            if (!first.cvss) first.cvss = n->cvss;
        }

    std::sort(merged.begin(), merged.end(), [](const ThreatNode& a, const ThreatNode& b) { return a.id < b.id; });
    for (auto& n : merged) {
        if (!validate_node(n).empty()) {
            ++rep.invalid_nodes;
            continue;
        }
        result.graph.add_node(std::move(n));
        ++rep.nodes_added;
    }

    for (const auto& s : streams)
        for (const auto& rec : s) {
            const auto* e = std::get_if<EdgeRecord>(&rec);
            if (!e) continue;
            const NodeId a = e->from(), b = e->to();
            if (!result.graph.contains(a) || !result.graph.contains(b)) {
                ++rep.dangling_edges;
                rep.dangling.push_back(*e);
                continue;
            }
            if (!layers_adjacent(a.layer, b.layer) || a == b) {
                ++rep.rejected_edges;
                continue;
            }
            if (result.graph.add_edge(a, b)) ++rep.edges_added;
        }
    result.graph.freeze();
    return result;
}

inline LoadResult load_graph(std::initializer_list<RecordStream> streams) {
    std::vector<RecordStream> v(streams);
    return load_graph(std::span<const RecordStream>(v));
}

/// Canonical JSON Lines: node lines sorted by (layer, id), then edge lines
/// sorted by (upper endpoint, lower endpoint). Output is a pure function
/// of graph content.
inline std::string export_canonical(const ThreatGraph& g) {
    using ojson = nlohmann::ordered_json;
    std::string out;
    auto emit = [&out](const ojson& j) {
        out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        out += '\n';
    };
    for (const auto& id : g.node_ids()) {
        const ThreatNode& n = g.node(id);
        ojson j;
        j["t"] = "node";
        j["layer"] = layer_name(id.layer);
        j["id"] = id.local_id;
        j["name"] = n.name;
        j["desc"] = n.description;
        j["cvss"] = n.cvss ? ojson(*n.cvss) : ojson(nullptr);
        emit(j);
    }
    for (const auto& [a, b] : g.edges()) {
        ojson j;
        j["t"] = "edge";
        j["a_layer"] = layer_name(a.layer);
        j["a"] = a.local_id;
        j["b_layer"] = layer_name(b.layer);
        j["b"] = b.local_id;
        emit(j);
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Convenience: read a canonical JSONL file into a frozen graph.
inline ThreatGraph load_canonical_file(const std::string& path) {
    return load_graph({parse_source(SourceKind::CanonicalJsonl, read_file(path))}).graph;
}

}  // namespace bron
