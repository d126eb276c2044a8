#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "enriched/errors.hpp"
#include "enriched/io.hpp"

namespace enriched::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct PhOptions {
  std::string input;
  std::string measurement;
  std::size_t degree = 0;
  std::uint32_t prime = kDefaultPrime;
  bool grid = false;
  bool barcodes = false;
  bool functor = false;
  bool dot = false;
  std::string out_dir;
};

struct SeoOptions {
  std::string source;
  std::string target;
  std::string seo;
  std::string spec;
  std::string alpha;
  std::string incarnation;
  std::string map;
  std::string out;
};

struct InterleaveOptions {
  std::string input;
  std::string phi;
  std::string psi;
  std::size_t degree = 0;
  std::uint32_t prime = kDefaultPrime;
};

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir + "': " + ec.message());
}

// Writes to <dir>/<name> when a directory is given, else to the stream.
void deliver(std::ostream& out, const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) {
    out << text;
    return;
  }
  ensure_dir(dir);
  io::write_text_file((fs::path(dir) / name).string(), text);
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  return out;
}

int cmd_metric(const std::string& input, std::ostream& out) {
  const auto data = io::parse_dataset(io::read_json_file(input));
  const auto d = pseudometric(data);
  const auto& ids = data.domain().ids();
  out << "x";
  for (const auto& id : ids) out << "," << id;
  out << "\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i];
    for (std::size_t j = 0; j < ids.size(); ++j) out << "," << d(i, j);
    out << "\n";
  }
  return 0;
}

int cmd_analyze(const std::string& input, std::ostream& out) {
  emit(out, io::analysis_report(io::parse_incarnation(io::read_json_file(input))));
  return 0;
}

int cmd_ph(const PhOptions& o, std::ostream& out) {
  require_prime(o.prime);
  const auto inc = io::parse_incarnation_or_dataset(io::read_json_file(o.input));
  const bool any = o.grid || o.barcodes || o.functor || o.dot;
  const bool grid = o.grid || !any;
  if (grid || o.barcodes) {
    if (o.measurement.empty()) throw InputError("--measurement is required for --grid and --barcodes");
    const std::size_t phi = inc.data().index_of(o.measurement);
    if (grid) {
      const auto module = ph_grid(inc.data(), phi, o.degree, o.prime);
      Json j = io::grid_to_json(module);
      j["measurement"] = o.measurement;
      deliver(out, o.out_dir, "grid.json", j.dump(2) + "\n");
    }
    if (o.barcodes) {
      const auto d = pseudometric(inc.data());
      std::string csv = "r,s_birth,s_death,degree\n";
      for (const auto& r : d.distinct_values()) {
        csv += io::barcode_csv(r, slice_barcode(d, inc.data().values(phi), o.degree, o.prime, r), o.degree);
      }
      deliver(out, o.out_dir, "barcodes.csv", csv);
    }
  }
  if (o.dot) deliver(out, o.out_dir, "graph.dot", to_dot(build_graph(inc)));
  if (o.functor) {
    if (o.out_dir.empty()) throw InputError("--functor writes a bundle and needs --out DIR");
    const auto functor = ph_functor(inc, o.degree, o.prime);
    const fs::path root(o.out_dir);
    ensure_dir((root / "edges").string());
    Json index;
    index["graph"] = io::graph_to_json(functor.base);
    Json objects = Json::object();
    for (std::size_t v = 0; v < functor.objects.size(); ++v) {
      objects[functor.base.vertices()[v]] = io::grid_to_json(functor.objects[v]);
    }
    index["objects"] = std::move(objects);
    Json files = Json::array();
    std::size_t k = 0;
    for (const auto& [edge, map] : functor.arrows) {
      Json e;
      e["source"] = functor.base.vertices()[edge.source];
      e["color"] = functor.base.colors()[edge.color];
      e["target"] = functor.base.vertices()[edge.target];
      e["map"] = io::morphism_to_json(map);
      std::ostringstream name;
      name << "edge_" << k++ << "_" << safe_name(functor.base.vertices()[edge.source]) << "_"
           << safe_name(functor.base.colors()[edge.color]) << ".json";
      io::write_text_file((root / "edges" / name.str()).string(), e.dump(2) + "\n");
      files.push_back("edges/" + name.str());
    }
    index["edges"] = std::move(files);
    io::write_text_file((root / "functor.json").string(), index.dump(2) + "\n");
    emit(out, Json{{"status", "ok"}, {"edges", k}, {"directory", o.out_dir}});
  }
  return 0;
}

int cmd_seo_check(const SeoOptions& o, std::ostream& out) {
  const auto source = io::parse_incarnation(io::read_json_file(o.source));
  const auto target = io::parse_incarnation(io::read_json_file(o.target));
  const auto spec = io::read_json_file(o.seo);
  if (!spec.contains("alpha") || !spec.contains("T")) throw InputError("SEO file needs 'alpha' and 'T'");
  const auto seo = validate_seo(source, target, io::parse_measurement_map(spec.at("alpha"), source.data(), target.data()),
                                io::parse_operation_map(spec.at("T"), source, target));
  Json j{{"status", "pass"}};
  j["seo"] = io::seo_to_json(seo);
  emit(out, j);
  return 0;
}

int cmd_seo_extend(const SeoOptions& o, std::ostream& out) {
  const auto source = io::parse_incarnation(io::read_json_file(o.source));
  const auto target = io::parse_incarnation(io::read_json_file(o.target));
  const auto spec = io::read_json_file(o.spec);
  if (!spec.contains("basis") || !spec.at("basis").is_object()) throw InputError("extension file needs a 'basis' object");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [from, to] : spec.at("basis").items()) {
    if (!to.is_string()) throw InputError("basis images must be measurement names");
    pairs.emplace_back(source.data().index_of(from), target.data().index_of(to.get<std::string>()));
  }
  std::sort(pairs.begin(), pairs.end());
  MeasurementSet basis;
  SetMap images;
  for (const auto& [w, psi] : pairs) {
    basis.push_back(w);
    images.push_back(psi);
  }
  if (!spec.contains("T")) throw InputError("extension file needs 'T'");
  const SetMap T = io::parse_operation_map(spec.at("T"), source, target);
  ExtensionVariant variant = ExtensionVariant::seo;
  if (spec.contains("variant")) {
    const auto v = spec.at("variant").get<std::string>();
    if (v == "meo") {
      variant = ExtensionVariant::meo;
    } else if (v == "geo") {
      variant = ExtensionVariant::geo;
    } else if (v != "seo") {
      throw InputError("unknown extension variant '" + v + "'");
    }
  }
  ExtensionOptions options;
  if (spec.contains("max_word_length")) options.max_word_length = spec.at("max_word_length").get<std::size_t>();
  const auto seo = extend_from_basis(source, target, basis, images, T, variant, options);
  Json j{{"status", "pass"}, {"variant", to_string(variant)}};
  j["seo"] = io::seo_to_json(seo);
  if (!o.out.empty()) io::write_text_file(o.out, io::seo_to_json(seo).dump(2) + "\n");
  emit(out, j);
  return 0;
}

int cmd_seo_realize(const SeoOptions& o, std::ostream& out) {
  const auto source = io::parse_incarnation_or_dataset(io::read_json_file(o.source));
  const auto target = io::parse_incarnation_or_dataset(io::read_json_file(o.target));
  const auto spec = io::read_json_file(o.alpha);
  RealizationSearch found;
  if (spec.contains("alpha") && spec.at("alpha").is_object()) {
    const SetMap alpha = io::parse_measurement_map(spec.at("alpha"), source.data(), target.data());
    SetMap T;
    if (spec.contains("T")) {
      T = io::parse_operation_map(spec.at("T"), source, target);
      found = find_seo_realization(validate_seo(source, target, alpha, T));
    } else {
      found = find_realization(source.data(), target.data(), alpha);
    }
  } else {
    found = find_realization(source.data(), target.data(), io::parse_measurement_map(spec, source.data(), target.data()));
  }
  Json j;
  if (found.realization) {
    j["status"] = "realized";
    j["realization"] = io::point_table_to_json(*found.realization);
  } else {
    j["status"] = "no realization";
    Json w = Json::object();
    if (found.empty_point) w["point"] = target.domain().id(*found.empty_point);
    w["reason"] = found.empty_point ? "no candidate image for this point" : "no assignment commutes with the operations";
    j["witness"] = std::move(w);
  }
  emit(out, j);
  return 0;
}

int cmd_seo_decompose(const SeoOptions& o, std::ostream& out) {
  const auto inc = io::parse_incarnation(io::read_json_file(o.incarnation));
  const auto result = decompose(inc);
  Json j{{"status", "isomorphism"}};
  j["blocks"] = blocks(inc).size();
  j["dimension"] = dimension(inc);
  j["dimension_after"] = dimension(result.incarnation);
  j["blocks_after"] = blocks(result.incarnation).size();
  j["seo"] = io::seo_to_json(result.seo);
  if (o.out.empty()) {
    j["incarnation"] = io::incarnation_to_json(result.incarnation);
  } else {
    io::write_text_file(o.out, io::incarnation_to_json(result.incarnation).dump(2) + "\n");
  }
  emit(out, j);
  return 0;
}

int cmd_seo_units(const SeoOptions& o, std::ostream& out) {
  const auto inc = io::parse_incarnation_or_dataset(io::read_json_file(o.incarnation));
  const auto f = io::parse_value_map(io::read_json_file(o.map));
  const auto result = change_units_seo(f, inc);
  Json j{{"status", "pass"}, {"map", f.describe()}};
  j["seo"] = io::seo_to_json(result.seo);
  if (o.out.empty()) {
    j["incarnation"] = io::incarnation_to_json(result.incarnation);
  } else {
    io::write_text_file(o.out, io::incarnation_to_json(result.incarnation).dump(2) + "\n");
  }
  emit(out, j);
  return 0;
}

int cmd_interleave(const InterleaveOptions& o, std::ostream& out) {
  require_prime(o.prime);
  const auto data = io::parse_incarnation_or_dataset(io::read_json_file(o.input)).data();
  const auto result = interleave_upper(data, data.index_of(o.phi), data.index_of(o.psi), o.degree, o.prime);
  Json j;
  j["upper"] = io::rational_to_json(result.upper);
  j["lower"] = io::rational_to_json(result.lower);
  j["degree"] = o.degree;
  j["prime"] = o.prime;
  j["triangles_checked"] = result.triangles_checked;
  j["naturality_squares_checked"] = result.naturality_squares_checked;
  emit(out, j);
  return 0;
}

int cmd_ops(bool automorphisms, const std::string& input, std::optional<std::size_t> guard, std::ostream& out) {
  const auto data = io::parse_incarnation_or_dataset(io::read_json_file(input)).data();
  const std::size_t bound = guard ? *guard : guard_from_environment(kDefaultEnumerationGuard);
  const auto ops = automorphisms ? enumerate_aut(data, bound) : enumerate_end(data, bound);
  Json list = Json::object();
  for (const auto& op : ops.ops) list[op.name] = io::point_table_to_json(op.map);
  Json j;
  j["count"] = ops.ops.size();
  j["operations"] = std::move(list);
  emit(out, j);
  return 0;
}

int report(std::ostream& out, std::ostream& err, const Error& e, const std::string& kind, int code) {
  emit(out, io::error_to_json(e, kind));
  err << "error: " << e.what() << "\n";
  for (const auto& [k, v] : e.witness()) err << "  " << k << ": " << v << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistent homology and equivariant operators for data sets with operations", "enriched-ph"};
  app.require_subcommand(1);

  std::string metric_input;
  auto* metric = app.add_subcommand("metric", "Print the pseudometric d_Phi as CSV");
  metric->add_option("dataset", metric_input, "Data set JSON")->required();

  std::string analyze_input;
  auto* analyze = app.add_subcommand("analyze", "Report kind, blocks, basis and dimension of an incarnation");
  analyze->add_option("incarnation", analyze_input, "Incarnation JSON")->required();

  PhOptions ph_opts;
  auto* ph = app.add_subcommand("ph", "Bigraded persistent homology of a measurement");
  ph->add_option("input", ph_opts.input, "Incarnation or data set JSON")->required();
  ph->add_option("-m,--measurement", ph_opts.measurement, "Measurement name");
  ph->add_option("-d,--degree", ph_opts.degree, "Homology degree");
  ph->add_option("-p,--prime", ph_opts.prime, "Field characteristic");
  ph->add_flag("--grid", ph_opts.grid, "Emit the critical grid JSON (default)");
  ph->add_flag("--barcodes", ph_opts.barcodes, "Emit slice barcodes as CSV");
  ph->add_flag("--functor", ph_opts.functor, "Write the persistence functor bundle");
  ph->add_flag("--dot", ph_opts.dot, "Emit the Grothendieck graph in DOT");
  ph->add_option("-o,--out", ph_opts.out_dir, "Output directory");

  SeoOptions seo_opts;
  auto* seo = app.add_subcommand("seo", "Set equivariant operators");
  seo->require_subcommand(1);
  auto* check = seo->add_subcommand("check", "Validate (alpha, T)");
  check->add_option("--source", seo_opts.source)->required();
  check->add_option("--target", seo_opts.target)->required();
  check->add_option("--seo", seo_opts.seo, "JSON with 'alpha' and 'T'")->required();
  auto* extend = seo->add_subcommand("extend", "Extend basis images to an operator");
  extend->add_option("--source", seo_opts.source)->required();
  extend->add_option("--target", seo_opts.target)->required();
  extend->add_option("--spec", seo_opts.spec, "JSON with 'basis', 'T' and optional 'variant'")->required();
  extend->add_option("-o,--out", seo_opts.out, "Write the constructed operator here");
  auto* realize = seo->add_subcommand("realize", "Search a realization of alpha");
  realize->add_option("--source", seo_opts.source)->required();
  realize->add_option("--target", seo_opts.target)->required();
  realize->add_option("--alpha", seo_opts.alpha, "Measurement map JSON, or {'alpha','T'}")->required();
  auto* decomp = seo->add_subcommand("decompose", "Diagonal decomposition into blocks");
  decomp->add_option("incarnation", seo_opts.incarnation)->required();
  decomp->add_option("-o,--out", seo_opts.out, "Write the diagonal incarnation here");
  auto* units = seo->add_subcommand("units", "Change of units along a value map");
  units->add_option("incarnation", seo_opts.incarnation)->required();
  units->add_option("--map", seo_opts.map, "Value map JSON")->required();
  units->add_option("-o,--out", seo_opts.out, "Write the new incarnation here");

  InterleaveOptions il_opts;
  auto* interleave = app.add_subcommand("interleave", "Certified bounds on the interleaving distance");
  interleave->add_option("input", il_opts.input, "Data set or incarnation JSON")->required();
  interleave->add_option("--phi", il_opts.phi)->required();
  interleave->add_option("--psi", il_opts.psi)->required();
  interleave->add_option("-d,--degree", il_opts.degree);
  interleave->add_option("-p,--prime", il_opts.prime);

  std::string ops_input;
  std::optional<std::size_t> ops_guard;
  auto* ops = app.add_subcommand("ops", "Enumerate operations of a data set");
  ops->require_subcommand(1);
  auto* end = ops->add_subcommand("end", "All Phi-operations");
  auto* aut = ops->add_subcommand("aut", "Bijective Phi-operations");
  for (auto* sub : {end, aut}) {
    sub->add_option("dataset", ops_input)->required();
    sub->add_option("--guard", ops_guard, "Largest domain to enumerate");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (metric->parsed()) return cmd_metric(metric_input, out);
    if (analyze->parsed()) return cmd_analyze(analyze_input, out);
    if (ph->parsed()) return cmd_ph(ph_opts, out);
    if (check->parsed()) return cmd_seo_check(seo_opts, out);
    if (extend->parsed()) return cmd_seo_extend(seo_opts, out);
    if (realize->parsed()) return cmd_seo_realize(seo_opts, out);
    if (decomp->parsed()) return cmd_seo_decompose(seo_opts, out);
    if (units->parsed()) return cmd_seo_units(seo_opts, out);
    if (interleave->parsed()) return cmd_interleave(il_opts, out);
    if (end->parsed()) return cmd_ops(false, ops_input, ops_guard, out);
    if (aut->parsed()) return cmd_ops(true, ops_input, ops_guard, out);
  } catch (const InputError& e) {
    return report(out, err, e, "input", 2);
  } catch (const InvalidIncarnation& e) {
    return report(out, err, e, "invalid-incarnation", 3);
  } catch (const HypothesisViolation& e) {
    return report(out, err, e, "hypothesis-violation", 4);
  } catch (const Error& e) {
    return report(out, err, e, "internal", 1);
  } catch (const nlohmann::json::exception& e) {
    return report(out, err, InputError(std::string("malformed input: ") + e.what()), "input", 2);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command given\n";
  return 2;
}

}  // namespace enriched::cli
