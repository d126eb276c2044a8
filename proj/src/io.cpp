#include "enriched/io.hpp"

#include <fstream>
#include <sstream>

#include "enriched/errors.hpp"

namespace enriched::io {

namespace {

const Json& require(const Json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(context) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::string require_string(const Json& j, const char* context) {
  if (!j.is_string()) throw InputError(std::string(context) + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

Domain parse_domain(const Json& j) {
  if (!j.is_array()) throw InputError("domain must be an array of identifiers");
  std::vector<std::string> ids;
  for (const auto& id : j) ids.push_back(require_string(id, "domain"));
  return Domain(std::move(ids));
}

Json domain_to_json(const Domain& d) {
  Json out = Json::array();
  for (const auto& id : d.ids()) out.push_back(id);
  return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Rational parse_rational(const Json& value) {
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_float()) return Rational::parse(value.dump());
  throw InputError("expected a rational number, got " + value.dump());
}

Json rational_to_json(const Rational& q) { return q.to_string(); }

DataSet parse_dataset(const Json& j) {
  Domain domain = parse_domain(require(j, "domain", "dataset"));
  const Json& ms = require(j, "measurements", "dataset");
  if (!ms.is_object()) throw InputError("dataset: measurements must be an object of name -> values");
  std::vector<Measurement> out;
  for (const auto& [name, values] : ms.items()) {
    if (!values.is_array() || values.size() != domain.size()) {
      throw DomainMismatch("measurement '" + name + "' must have one value per domain point",
                           {{"measurement", name}});
    }
    Values v;
    for (const auto& x : values) v.push_back(parse_rational(x));
    out.push_back({std::move(v), {name}});
  }
  const bool allow_empty = j.contains("allow_empty") && j.at("allow_empty").is_boolean() && j.at("allow_empty").get<bool>();
  return DataSet(std::move(domain), std::move(out), allow_empty);
}

Json dataset_to_json(const DataSet& data) {
  Json out;
  out["domain"] = domain_to_json(data.domain());
  Json ms = Json::object();
  for (const auto& m : data.measurements()) {
    Json values = Json::array();
    for (const auto& v : m.values) values.push_back(rational_to_json(v));
    ms[m.name()] = std::move(values);
  }
  out["measurements"] = std::move(ms);
  if (data.allows_empty()) out["allow_empty"] = true;
  return out;
}

PointMap parse_point_table(const Json& j, const Domain& source, const Domain& target) {
  if (!j.is_object()) throw InputError("point map must be an object of id -> id");
  std::map<std::string, std::string> table;
  for (const auto& [x, y] : j.items()) table[x] = require_string(y, "point map");
  return PointMap::from_table(source, target, table);
}

Json point_table_to_json(const PointMap& f) {
  Json out = Json::object();
  for (std::size_t x = 0; x < f.source().size(); ++x) out[f.source().id(x)] = f.target().id(f(x));
  return out;
}

PointMap parse_point_map(const Json& j) {
  return parse_point_table(require(j, "map", "point map"), parse_domain(require(j, "source", "point map")),
                           parse_domain(require(j, "target", "point map")));
}

ValueMap parse_value_map(const Json& j) {
  if (j.is_object() && j.contains("table")) {
    const Json& t = j.at("table");
    if (!t.is_object()) throw InputError("value map table must be an object");
    std::map<Rational, Rational> entries;
    for (const auto& [k, v] : t.items()) entries[Rational::parse(k)] = parse_rational(v);
    return ValueMap::table(std::move(entries));
  }
  const std::string builtin = require_string(require(j, "builtin", "value map"), "value map");
  if (builtin == "identity") return ValueMap::identity();
  if (builtin == "negate") return ValueMap::negate();
  if (builtin == "clamp-sign") return ValueMap::clamp_sign();
  if (builtin == "affine") {
    return ValueMap::affine(parse_rational(require(j, "a", "affine value map")),
                            parse_rational(require(j, "b", "affine value map")));
  }
  throw InputError("unknown builtin value map '" + builtin + "'");
}

Incarnation parse_incarnation(const Json& j) {
  DataSet data = parse_dataset(require(j, "dataset", "incarnation"));
  std::vector<Operation> ops;
  if (!j.contains("M")) {
    ops.push_back({PointMap::identity(data.domain()), "id"});
  } else {
    const Json& m = j.at("M");
    if (!m.is_object()) throw InputError("incarnation: M must be an object of name -> point map");
    for (const auto& [name, table] : m.items()) {
      if (table.is_string() && table.get<std::string>() == "identity") {
        ops.push_back({PointMap::identity(data.domain()), name});
      } else {
        ops.push_back({parse_point_table(table, data.domain(), data.domain()), name});
      }
    }
  }
  return Incarnation(std::move(data), std::move(ops));
}

Json incarnation_to_json(const Incarnation& inc) {
  Json out;
  out["dataset"] = dataset_to_json(inc.data());
  Json m = Json::object();
  for (const auto& op : inc.ops()) m[op.name] = point_table_to_json(op.map);
  out["M"] = std::move(m);
  return out;
}

Incarnation parse_incarnation_or_dataset(const Json& j) {
  if (j.is_object() && j.contains("dataset")) return parse_incarnation(j);
  return Incarnation(parse_dataset(j), {{PointMap::identity(parse_domain(require(j, "domain", "dataset"))), "id"}});
}

SetMap parse_measurement_map(const Json& j, const DataSet& source, const DataSet& target) {
  if (!j.is_object()) throw InputError("measurement map must be an object of name -> name");
  std::vector<std::optional<std::size_t>> out(source.size());
  for (const auto& [from, to] : j.items()) {
    out[source.index_of(from)] = target.index_of(require_string(to, "measurement map"));
  }
  SetMap result;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!out[k]) throw InputError("measurement map leaves '" + source[k].name() + "' unassigned");
    result.push_back(*out[k]);
  }
  return result;
}

SetMap parse_operation_map(const Json& j, const Incarnation& source, const Incarnation& target) {
  if (!j.is_object()) throw InputError("operation map must be an object of name -> name");
  std::vector<std::optional<std::size_t>> out(source.op_count());
  for (const auto& [from, to] : j.items()) {
    auto g = source.find_op_name(from);
    if (!g) throw InputError("unknown source operation '" + from + "'");
    const std::string name = require_string(to, "operation map");
    auto h = target.find_op_name(name);
    if (!h) throw InputError("unknown target operation '" + name + "'");
    out[*g] = *h;
  }
  SetMap result;
  for (std::size_t g = 0; g < out.size(); ++g) {
    if (!out[g]) throw InputError("operation map leaves '" + source.ops()[g].name + "' unassigned");
    result.push_back(*out[g]);
  }
  return result;
}

Json seo_to_json(const Seo& seo) {
  Json out;
  Json alpha = Json::object();
  for (std::size_t k = 0; k < seo.alpha.size(); ++k) alpha[seo.source.data()[k].name()] = seo.target.data()[seo.alpha[k]].name();
  Json t = Json::object();
  for (std::size_t g = 0; g < seo.T.size(); ++g) t[seo.source.ops()[g].name] = seo.target.ops()[seo.T[g]].name;
  out["alpha"] = std::move(alpha);
  out["T"] = std::move(t);
  out["meo"] = seo.is_meo;
  out["geo"] = seo.is_geo;
  out["geometric"] = seo.is_geometric();
  out["isomorphism"] = seo.is_isomorphism();
  out["realization"] = seo.realization ? point_table_to_json(*seo.realization) : Json(nullptr);
  return out;
}

Json analysis_report(const Incarnation& inc) {
  Json out;
  out["kind"] = to_string(inc.kind());
  Json blocks_json = Json::array();
  for (const auto& block : blocks(inc)) {
    Json names = Json::array();
    for (auto k : block) names.push_back(inc.data()[k].name());
    blocks_json.push_back(std::move(names));
  }
  out["blocks"] = std::move(blocks_json);
  Json basis = Json::array();
  for (auto k : find_basis(inc)) basis.push_back(inc.data()[k].name());
  const std::size_t dim = basis.size();
  out["basis"] = std::move(basis);
  out["dimension"] = dim;
  return out;
}

Json graph_to_json(const GrothendieckGraph& g) {
  Json out;
  out["vertices"] = g.vertices();
  out["colors"] = g.colors();
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(Json::array({g.vertices()[e.source], g.colors()[e.color], g.vertices()[e.target]}));
  }
  out["edges"] = std::move(edges);
  return out;
}

GrothendieckGraph graph_from_json(const Json& j) {
  std::vector<std::string> vertices, colors;
  for (const auto& v : require(j, "vertices", "graph")) vertices.push_back(require_string(v, "graph vertices"));
  for (const auto& c : require(j, "colors", "graph")) colors.push_back(require_string(c, "graph colors"));
  GrothendieckGraph g(std::move(vertices), std::move(colors));
  for (const auto& e : require(j, "edges", "graph")) {
    if (!e.is_array() || e.size() != 3) throw InputError("graph edges must be [vertex, color, vertex] triples");
    auto v = g.find_vertex(require_string(e[0], "edge"));
    auto c = g.find_color(require_string(e[1], "edge"));
    auto w = g.find_vertex(require_string(e[2], "edge"));
    if (!v || !c || !w) throw InputError("edge " + e.dump() + " names an unknown vertex or color");
    g.add_edge(*v, *c, *w);
  }
  return g;
}

Json matrix_to_json(const FpMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = std::move(rows);
  return out;
}

Json grid_to_json(const BigradedPersistence& module, bool with_maps) {
  Json out;
  Json r = Json::array(), s = Json::array();
  for (const auto& v : module.grid.r) r.push_back(rational_to_json(v));
  for (const auto& v : module.grid.s) s.push_back(rational_to_json(v));
  out["degree"] = module.degree;
  out["prime"] = module.prime;
  out["r"] = std::move(r);
  out["s"] = std::move(s);
  out["dims"] = module.dimensions();
  if (with_maps) {
    const std::size_t nr = module.grid.r.size(), ns = module.grid.s.size();
    Json r_ranks = Json::array(), s_ranks = Json::array();
    for (std::size_t i = 0; i < nr; ++i) {
      Json rr = Json::array(), sr = Json::array();
      for (std::size_t j = 0; j < ns; ++j) {
        if (i + 1 < nr) rr.push_back(module.r_steps[module.index(i, j)].rank());
        if (j + 1 < ns) sr.push_back(module.s_steps[module.index(i, j)].rank());
      }
      if (i + 1 < nr) r_ranks.push_back(std::move(rr));
      s_ranks.push_back(std::move(sr));
    }
    out["maps"] = {{"r", std::move(r_ranks)}, {"s", std::move(s_ranks)}};
  }
  return out;
}

Json morphism_to_json(const GridMorphism& m) {
  Json out;
  Json r = Json::array(), s = Json::array();
  for (const auto& v : m.r) r.push_back(rational_to_json(v));
  for (const auto& v : m.s) s.push_back(rational_to_json(v));
  out["prime"] = m.prime;
  out["r"] = std::move(r);
  out["s"] = std::move(s);
  Json maps = Json::array();
  for (std::size_t i = 0; i < m.r.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.s.size(); ++j) row.push_back(matrix_to_json(m.maps[i * m.s.size() + j]));
    maps.push_back(std::move(row));
  }
  out["maps"] = std::move(maps);
  return out;
}

std::string barcode_csv(const Rational& r, const Barcode& bars, std::size_t degree) {
  std::ostringstream out;
  for (const auto& bar : bars) {
    out << r << "," << bar.birth << "," << (bar.death ? bar.death->to_string() : "inf") << "," << degree << "\n";
  }
  return out.str();
}

Json error_to_json(const Error& e, const std::string& kind) {
  Json out;
  out["status"] = "error";
  out["kind"] = kind;
  out["message"] = e.what();
  Json w = Json::object();
  for (const auto& [k, v] : e.witness()) w[k] = v;
  out["witness"] = std::move(w);
  return out;
}

}  // namespace enriched::io
