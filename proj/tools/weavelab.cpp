// Command line front end: analyze, weave-search, check-woven, perturb, example, reproduce.

#include <array>
#include <cstdio>
#include <tuple>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weavelab/gallery.hpp"
#include "weavelab/io.hpp"
#include "weavelab/perturbation.hpp"
#include "weavelab/subspace.hpp"
#include "weavelab/weaving.hpp"

using namespace weavelab;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct SearchFlags {
  std::string mode = "exhaustive";
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 22;
  int restarts = 32;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "exhaustive or heuristic")
        ->check(CLI::IsMember({"exhaustive", "heuristic"}));
    cmd->add_option("--exhaustive-cap", exhaustive_cap, "largest 2^n searched exhaustively");
    cmd->add_option("--restarts", restarts, "random restarts of the heuristic")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "seed for heuristic and sampled modes");
  }

  SearchConfig config() const {
    SearchConfig c;
    c.mode = mode == "heuristic" ? SearchMode::Heuristic : SearchMode::Exhaustive;
    c.exhaustive_cap = exhaustive_cap;
    c.restarts = restarts;
    c.seed = seed;
    return c;
  }

  Json json() const {
    return {{"mode", mode}, {"exhaustive_cap", exhaustive_cap}, {"restarts", restarts},
            {"seed", seed}};
  }
};

struct Source {
  FrameSystem system;
  Json info;
};

// "gallery:<name>" or a path to a frame system file.
Source load(const std::string& arg, std::optional<std::size_t> dim,
            std::optional<NormKind> norm) {
  const std::string prefix = "gallery:";
  if (arg.rfind(prefix, 0) == 0) {
    const std::string name = arg.substr(prefix.size());
    if (!dim) throw InputError("gallery source '" + arg + "' needs --dim");
    FrameSystem f = gallery_system(parse_gallery_name(name), *dim);
    if (norm) f = FrameSystem(NormedSpace(f.dim(), *norm), f.vectors(), f.functionals(), f.label());
    const std::string canonical = dump_frame_system(f);
    return {f, {{"source", arg}, {"dim", *dim}, {"sha256", sha256_hex(canonical)}}};
  }
  const std::string text = read_file(arg);
  FrameSystem f = parse_frame_system(text, arg, norm);
  return {f, {{"source", arg}, {"sha256", sha256_hex(text)}}};
}

std::optional<NormKind> norm_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return NormKind::parse(text);
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InputError("range must look like d0..d1, got '" + text + "'");
  try {
    const auto a = std::stoul(text.substr(0, dots));
    const auto b = std::stoul(text.substr(dots + 2));
    if (a < 1 || b < a) throw InputError("range '" + text + "' is empty or starts below 1");
    return {a, b};
  } catch (const std::logic_error&) {
    throw InputError("range must look like d0..d1, got '" + text + "'");
  }
}

void emit(const std::string& command, Json inputs, Json parameters, Json result,
          const std::string& out) {
  Json report;
  report["tool"] = "weavelab";
  report["version"] = kToolVersion;
  report["command"] = command;
  report["inputs"] = std::move(inputs);
  report["parameters"] = std::move(parameters);
  report["result"] = std::move(result);
  report["timestamp"] = utc_timestamp();
  const std::string text = report.dump(2) + "\n";
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

std::array<bool, 6> parse_conditions(const std::string& text) {
  std::array<bool, 6> on{};
  if (text.empty()) {
    on.fill(true);
    return on;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool found = false;
    for (std::size_t c = 0; c < 6; ++c) {
      if (item == unc_condition_name(c)) {
        on[c] = true;
        found = true;
      }
    }
    if (!found) throw InputError("unknown condition '" + item + "' (use i,ii,iii,iv,v,vi)");
  }
  return on;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weavelab: approximate Schauder frames and their weavings in finite dimensions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string out;
  std::string norm_text;
  std::optional<std::size_t> dim;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "constants of a single system");
  std::string analyze_path;
  SearchFlags analyze_flags;
  analyze->add_option("system", analyze_path, "frame system file or gallery:<name>")->required();
  analyze->add_option("--norm", norm_text, "override the norm (l1, l2, linf, lp:<p>)");
  analyze->add_option("--dim", dim, "dimension for gallery sources");
  analyze->add_option("--out", out, "report path (default stdout)");
  analyze_flags.attach(analyze);

  // weave-search
  auto* search = app.add_subcommand("weave-search", "worst weaving of two systems");
  std::string path_a, path_b, sweep, csv;
  SearchFlags search_flags;
  double blowup = kDefaultBlowUpThreshold;
  bool log_all = false;
  search->add_option("a", path_a, "first system")->required();
  search->add_option("b", path_b, "second system")->required();
  search->add_option("--norm", norm_text, "override the norm");
  search->add_option("--dim", dim, "dimension for gallery sources");
  search->add_option("--blowup-threshold", blowup, "constants above this count as not woven");
  search->add_option("--sweep", sweep, "d0..d1: regenerate gallery sources for each d");
  search->add_option("--csv", csv, "write the sweep table (d,constant) here");
  search->add_flag("--log-all-patterns", log_all, "record every pattern (2^n <= 4096)");
  search->add_option("--out", out, "report path (default stdout)");
  search_flags.attach(search);

  // check-woven
  auto* check = app.add_subcommand("check-woven", "conditions for all weavings of two bases");
  std::string conditions;
  SearchFlags check_flags;
  bool records = false;
  check->add_option("a", path_a, "first basis")->required();
  check->add_option("b", path_b, "second basis")->required();
  check->add_option("--norm", norm_text, "override the norm");
  check->add_option("--dim", dim, "dimension for gallery sources");
  check->add_option("--conditions", conditions, "subset of i,ii,iii,iv,v,vi");
  check->add_option("--blowup-threshold", blowup, "constants above this count as failures");
  check->add_flag("--records", records, "include per-pattern records");
  check->add_option("--out", out, "report path (default stdout)");
  check_flags.attach(check);

  // perturb
  auto* perturb = app.add_subcommand("perturb", "perturbation budgets and certificates");
  std::string perturb_path, pair_path, basis_path;
  std::optional<double> op_scale;
  SearchFlags perturb_flags;
  perturb->add_option("system", perturb_path, "reference system")->required();
  auto* op_opt = perturb->add_option("--op-scale", op_scale, "T = s * Id, weave with (T x_i, f_i)");
  auto* pair_opt = perturb->add_option("--pair", pair_path, "second system for the pair budget");
  auto* basis_opt = perturb->add_option("--basis", basis_path, "candidate basis for the basis budget");
  op_opt->excludes(pair_opt)->excludes(basis_opt);
  pair_opt->excludes(basis_opt);
  perturb->add_option("--norm", norm_text, "override the norm");
  perturb->add_option("--dim", dim, "dimension for gallery sources");
  perturb->add_option("--blowup-threshold", blowup, "constants above this count as not woven");
  perturb->add_option("--out", out, "report path (default stdout)");
  perturb_flags.attach(perturb);

  // example
  auto* example = app.add_subcommand("example", "write a gallery system as a frame system file");
  std::string example_name;
  std::size_t example_dim = 0;
  bool vectors_only = false;
  example->add_option("name", example_name, "gallery name")->required();
  example->add_option("--dim", example_dim, "dimension")->required();
  example->add_flag("--vectors-only", vectors_only, "omit the biorthogonal functionals");
  example->add_option("--out", out, "file path (default stdout)");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "growth tables for the counterexample pairs");
  std::string repro_name;
  SearchFlags repro_flags;
  repro->add_option("name", repro_name, "summing-vs-standard, difference-vs-standard, block-pair, subspace-pair")
      ->required();
  repro->add_option("--sweep", sweep, "d0..d1 (default 2..12, subspace-pair 4..12)");
  repro->add_option("--csv", csv, "write the table here");
  repro->add_option("--out", out, "report path (default stdout)");
  repro_flags.attach(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    const std::optional<NormKind> norm = norm_flag(norm_text);

    if (analyze->parsed()) {
      const Source s = load(analyze_path, dim, norm);
      const ConstantReport r = analyze_system(s.system, analyze_flags.config());
      Json params = analyze_flags.json();
      params["norm"] = s.system.norm().to_string();
      emit("analyze", Json::array({s.info}), params, to_json(r), out);
      return 0;
    }

    if (search->parsed()) {
      WeaveOptions opts;
      opts.search = search_flags.config();
      opts.blow_up_threshold = blowup;
      opts.log_all_patterns = log_all;
      Json params = search_flags.json();
      params["blowup_threshold"] = blowup;
      params["log_all_patterns"] = log_all;
      if (!sweep.empty()) {
        const auto [d0, d1] = parse_range(sweep);
        params["sweep"] = sweep;
        Json inputs = Json::array();
        Json rows = Json::array();
        std::string table = "d,constant\n";
        for (std::size_t d = d0; d <= d1; ++d) {
          const Source a = load(path_a, d, norm);
          const Source b = load(path_b, d, norm);
          if (a.info.value("dim", 0) == 0 || b.info.value("dim", 0) == 0)
            throw InputError("--sweep needs gallery:<name> sources");
          inputs.push_back(a.info);
          inputs.push_back(b.info);
          const WeaveSearchResult r = worst_weaving(a.system, b.system, opts);
          Json row = to_json(r);
          row["d"] = d;
          rows.push_back(std::move(row));
          std::ostringstream line;
          line.precision(17);
          line << d << ',' << r.worst_constant << '\n';
          table += line.str();
        }
        if (!csv.empty()) write_file(csv, table);
        emit("weave-search", inputs, params, {{"sweep", rows}}, out);
        return 0;
      }
      const Source a = load(path_a, dim, norm);
      const Source b = load(path_b, dim, norm);
      const WeaveSearchResult r = worst_weaving(a.system, b.system, opts);
      if (!csv.empty()) {
        std::ostringstream line;
        line.precision(17);
        line << "d,constant\n" << a.system.dim() << ',' << r.worst_constant << '\n';
        write_file(csv, line.str());
      }
      emit("weave-search", Json::array({a.info, b.info}), params, to_json(r), out);
      return 0;
    }

    if (check->parsed()) {
      const Source a = load(path_a, dim, norm);
      const Source b = load(path_b, dim, norm);
      require_compatible(a.system, b.system);
      if (a.system.size() != a.system.dim())
        throw InputError("check-woven needs bases: " + path_a + " has " +
                         std::to_string(a.system.size()) + " vectors in dimension " +
                         std::to_string(a.system.dim()));
      UncOptions opts;
      opts.search = check_flags.config();
      opts.seed = check_flags.seed;
      opts.threshold = blowup;
      opts.enabled = parse_conditions(conditions);
      const UncVerdict v = unc_conditions(a.system.vectors(), b.system.vectors(), a.system.norm(), opts);
      Json params = check_flags.json();
      params["blowup_threshold"] = blowup;
      params["conditions"] = conditions.empty() ? "i,ii,iii,iv,v,vi" : conditions;
      emit("check-woven", Json::array({a.info, b.info}), params, to_json(v, records), out);
      return 0;
    }

    if (perturb->parsed()) {
      const Source s = load(perturb_path, dim, norm);
      PerturbOptions opts;
      opts.weave.search = perturb_flags.config();
      opts.weave.blow_up_threshold = blowup;
      opts.seed = perturb_flags.seed;
      opts.weave_when_unsatisfied = s.system.size() <= opts.exhaustive_max_dim;
      Json params = perturb_flags.json();
      params["blowup_threshold"] = blowup;
      Json inputs = Json::array({s.info});
      Json result;
      if (op_scale) {
        params["op_scale"] = *op_scale;
        const auto d = static_cast<Eigen::Index>(s.system.dim());
        const Matrix t = *op_scale * Matrix::Identity(d, d);
        result = to_json(operator_perturbation_check(s.system, t, opts));
      } else if (!pair_path.empty()) {
        const Source other = load(pair_path, dim, norm);
        inputs.push_back(other.info);
        result = to_json(pair_perturbation_check(s.system, other.system, opts));
      } else if (!basis_path.empty()) {
        const Source other = load(basis_path, dim, norm);
        inputs.push_back(other.info);
        result = to_json(basis_perturbation_check(s.system.vectors(), other.system.vectors(),
                                                  s.system.norm(), opts));
      } else {
        throw InputError("perturb needs one of --op-scale, --pair, --basis");
      }
      emit("perturb", inputs, params, result, out);
      return 0;
    }

    if (example->parsed()) {
      const GalleryName name = parse_gallery_name(example_name);
      const std::string text =
          vectors_only
              ? dump_frame_system(FrameSystem(NormedSpace(example_dim, gallery_norm(name)),
                                              gallery_vectors(name, example_dim),
                                              gallery_vectors(name, example_dim), to_string(name)),
                                  false)
              : dump_frame_system(gallery_system(name, example_dim));
      if (out.empty() || out == "-")
        std::cout << text;
      else
        write_file(out, text);
      return 0;
    }

    if (repro->parsed()) {
      std::size_t d0 = repro_name == "subspace-pair" ? 4 : 2;
      std::size_t d1 = 12;
      if (!sweep.empty()) std::tie(d0, d1) = parse_range(sweep);
      const ReproduceReport r = reproduce(repro_name, d0, d1, repro_flags.config());
      if (!csv.empty()) {
        std::ostringstream table;
        table.precision(17);
        for (std::size_t c = 0; c < r.columns.size(); ++c) table << (c ? "," : "") << r.columns[c];
        table << '\n';
        for (const auto& row : r.rows) {
          for (std::size_t c = 0; c < row.size(); ++c) table << (c ? "," : "") << row[c];
          table << '\n';
        }
        write_file(csv, table.str());
      }
      Json params = repro_flags.json();
      params["d0"] = d0;
      params["d1"] = d1;
      emit("reproduce", Json::array({{{"source", "reproduce:" + repro_name}}}), params, to_json(r),
           out);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotABasis& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotAFrame& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DistanceZero& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
