// hiergen: generate object-cluster hierarchies, replicate experiment
// batches, print closed-form estimates, and recompute statistics from files.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hiergen/analytics.hpp"
#include "hiergen/batch.hpp"
#include "hiergen/generator.hpp"
#include "hiergen/io.hpp"
#include "hiergen/metrics.hpp"
#include "hiergen/postprocess.hpp"
#include "hiergen/presets.hpp"

namespace fs = std::filesystem;
using namespace hiergen;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string stats_line(const HierarchyStats& s) {
  std::ostringstream out;
  out << "N=" << s.node_count << " L=" << s.leaf_count << " D=" << s.depth << " B=" << fmt(s.breadth.mean)
      << " B_std=" << fmt(s.breadth.std) << " P=" << fmt(s.path_length.mean) << " P_std=" << fmt(s.path_length.std)
      << " point_depth=" << fmt(s.mean_point_depth);
  return out.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t number = 0;
  for (auto part : io::split(text)) out.push_back(io::parse_double(part, number));
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HIERGEN_SEED")) {
    try {
      return io::parse_uint(env, 0);
    } catch (const ParseError&) {
      throw ParameterError("HIERGEN_SEED", "must be a non-negative integer");
    }
  }
  return 0;
}

// Model flags shared by generate and batch.
struct ModelFlags {
  std::string preset;
  std::string params_file;
  std::optional<std::uint64_t> n;
  std::optional<std::size_t> d;
  std::optional<double> alpha0, lambda, gamma, p, q, sigma_min, sigma_max;
  std::optional<std::size_t> max_depth;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app, bool with_preset) {
    if (with_preset) app.add_option("--preset", preset, "experiment set s00..s07");
    app.add_option("--params", params_file, "key=value parameter file");
    app.add_option("--n", n, "number of points");
    app.add_option("--d", d, "dimensions");
    app.add_option("--alpha0", alpha0);
    app.add_option("--lambda", lambda);
    app.add_option("--gamma", gamma);
    app.add_option("--p", p);
    app.add_option("--q", q);
    app.add_option("--sigma-min", sigma_min);
    app.add_option("--sigma-max", sigma_max);
    app.add_option("--max-depth", max_depth);
    app.add_option("--seed", seed, "base seed (default: $HIERGEN_SEED or 0)");
  }

  /// Starts from `base` and applies the explicit flags on top.
  GeneratorParams resolve(GeneratorParams base) const {
    if (!params_file.empty()) base = read_params(fs::path(params_file));
    if (n) base.n = *n;
    if (d) base.d = *d;
    if (alpha0) base.alpha0 = *alpha0;
    if (lambda) base.lambda = *lambda;
    if (gamma) base.gamma = *gamma;
    if (p) base.p = *p;
    if (q) base.q = *q;
    if (sigma_min) base.sigma_min = *sigma_min;
    if (sigma_max) base.sigma_max = *sigma_max;
    if (max_depth) base.max_depth = *max_depth;
    base.seed = seed ? *seed : (params_file.empty() ? default_seed() : base.seed);
    validate(base);
    return base;
  }

  GeneratorParams resolve() const {
    GeneratorParams base;
    if (!preset.empty()) {
      auto found = find_preset(preset);
      if (!found) throw ParameterError("preset", "unknown preset '" + preset + "'");
      base = preset_params(*found);
    } else if (params_file.empty() && (!n || !d)) {
      throw ParameterError("n", "give --preset, --params, or both --n and --d");
    }
    return resolve(base);
  }
};

std::vector<Preset> parse_presets(const std::string& text) {
  std::vector<Preset> out;
  for (auto part : io::split(text)) {
    const std::string item(io::trim(part));
    if (auto dots = item.find(".."); dots != std::string::npos) {
      auto first = find_preset(item.substr(0, dots));
      auto last = find_preset(item.substr(dots + 2));
      if (!first || !last) throw ParameterError("presets", "bad range '" + item + "'");
      bool inside = false;
      for (const auto& p : kPresets) {
        if (p.name == first->name) inside = true;
        if (inside) out.push_back(p);
        if (p.name == last->name) inside = false;
      }
    } else {
      auto found = find_preset(item);
      if (!found) throw ParameterError("presets", "unknown preset '" + item + "'");
      out.push_back(*found);
    }
  }
  return out;
}

void print_summary_row(const std::string& label, const BatchSummary& s) {
  std::cout << label << "  N=" << fmt(s.node_count.mean) << "±" << fmt(s.node_count.std)
            << "  L=" << fmt(s.leaf_count.mean) << "±" << fmt(s.leaf_count.std) << "  D=" << fmt(s.depth.mean)
            << "±" << fmt(s.depth.std) << "  B=" << fmt(s.breadth.mean) << "±" << fmt(s.breadth.std)
            << "  P=" << fmt(s.path_length.mean) << "±" << fmt(s.path_length.std) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-cluster hierarchy generator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate one dataset");
  ModelFlags gen_flags;
  gen_flags.add_to(*gen, true);
  std::string out_dir;
  bool no_prune = false;
  bool do_reassign = false;
  std::string rescale_scale, rescale_offset, fit_box;
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_flag("--no-prune", no_prune, "keep instantiated nodes with empty subtrees");
  gen->add_flag("--reassign", do_reassign, "move points to their maximum-likelihood node");
  gen->add_option("--rescale", rescale_scale, "per-dimension scale, comma separated");
  gen->add_option("--offset", rescale_offset, "per-dimension offset, comma separated");
  gen->add_option("--fit-box", fit_box, "lo,hi: map the data bounding box onto [lo,hi]^d")
      ->excludes("--rescale");

  // batch
  auto* bat = app.add_subcommand("batch", "replicate parameter sets and summarize");
  ModelFlags bat_flags;
  bat_flags.add_to(*bat, false);
  std::string presets;
  std::size_t replicates = 100;
  std::size_t jobs = 1;
  bool both = false;
  bool bat_reassign = false;
  bool bat_no_prune = false;
  std::string summary_out;
  bat->add_option("--presets", presets, "e.g. s00..s07 or s00,s03");
  bat->add_option("--replicates", replicates, "replicates per set");
  bat->add_option("--jobs", jobs, "worker threads");
  bat->add_flag("--both", both, "summarize raw and reassigned datasets");
  bat->add_flag("--reassign", bat_reassign, "summarize reassigned datasets only");
  bat->add_flag("--no-prune", bat_no_prune);
  bat->add_option("--out", summary_out, "summary table path");

  // estimate
  auto* est = app.add_subcommand("estimate", "closed-form structure estimates");
  double e_alpha0 = 1.0, e_lambda = 0.5, e_gamma = 0.2, e_p = 1.0, e_q = 5.0;
  std::size_t levels = 4, indices = 4;
  bool verify = false;
  std::uint64_t samples = 1000000;
  std::optional<std::uint64_t> e_seed;
  est->add_option("--alpha0", e_alpha0);
  est->add_option("--lambda", e_lambda);
  est->add_option("--gamma", e_gamma);
  est->add_option("--p", e_p);
  est->add_option("--q", e_q);
  est->add_option("--levels", levels, "retention levels to print");
  est->add_option("--indices", indices, "child indices to print");
  est->add_flag("--verify", verify, "compare against Monte-Carlo simulation");
  est->add_option("--samples", samples, "Monte-Carlo sample count");
  est->add_option("--seed", e_seed);

  // stats
  auto* sts = app.add_subcommand("stats", "recompute statistics from written files");
  std::string points_file, hierarchy_file;
  sts->add_option("--points", points_file)->required();
  sts->add_option("--hierarchy", hierarchy_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const GeneratorParams params = gen_flags.resolve();
      std::optional<AffineTransform> transform;
      if (!rescale_scale.empty() || !rescale_offset.empty()) {
        AffineTransform t{std::vector<double>(params.d, 1.0), std::vector<double>(params.d, 0.0)};
        if (!rescale_scale.empty()) t.scale = parse_list(rescale_scale);
        if (!rescale_offset.empty()) t.offset = parse_list(rescale_offset);
        if (t.scale.size() == 1) t.scale.assign(params.d, t.scale[0]);
        if (t.offset.size() == 1) t.offset.assign(params.d, t.offset[0]);
        transform = t;
      }
      std::optional<std::vector<double>> box;
      if (!fit_box.empty()) {
        box = parse_list(fit_box);
        if (box->size() != 2) throw ParameterError("fit-box", "expected lo,hi");
      }

      Dataset data = generate(params, {!no_prune});
      if (do_reassign) data = reassign(std::move(data));
      if (box) transform = hiergen::fit_box(data.points, params.d, (*box)[0], (*box)[1]);
      if (transform) data = rescale(std::move(data), *transform);

      fs::create_directories(out_dir);
      write_points(fs::path(out_dir) / "points.csv", data.points, params.d);
      write_hierarchy(fs::path(out_dir) / "hierarchy.csv", data.hierarchy);
      io::with_output(fs::path(out_dir) / "params.txt", [&](std::ostream& o) { write_params(o, params); });
      std::cout << stats_line(compute_stats(data.hierarchy)) << '\n';
      return 0;
    }

    if (*bat) {
      if (replicates < 1) throw ParameterError("replicates", "must be >= 1");
      std::vector<std::pair<std::string, GeneratorParams>> sets;
      if (!presets.empty()) {
        for (const auto& p : parse_presets(presets)) {
          GeneratorParams base = preset_params(p);
          sets.emplace_back(std::string(p.name), bat_flags.resolve(base));
        }
      } else {
        sets.emplace_back("custom", bat_flags.resolve());
      }
      BatchOptions options;
      options.replicates = replicates;
      options.jobs = jobs;
      options.prune = !bat_no_prune;
      options.reassign = both || bat_reassign;

      SummaryTable table;
      for (const auto& [label, params] : sets) {
        const BatchResult result = run_batch(params, options);
        if (!bat_reassign || both) {
          table.emplace_back(label, result.raw);
          print_summary_row(label, result.raw);
        }
        if (result.reassigned) {
          table.emplace_back(label + "r", *result.reassigned);
          print_summary_row(label + "r", *result.reassigned);
        }
      }
      if (!summary_out.empty()) {
        const fs::path target(summary_out);
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        write_histograms(target, table);
      }
      return 0;
    }

    if (*est) {
      for (auto [name, v] : {std::pair{"alpha0", e_alpha0}, {"lambda", e_lambda}, {"gamma", e_gamma}, {"p", e_p},
                             {"q", e_q}}) {
        if (!(v > 0.0)) throw ParameterError(name, "must be > 0");
      }
      const std::uint64_t seed = e_seed ? *e_seed : default_seed();
      RandomSource rng(seed);
      std::vector<Proportion> retention_mc, selection_mc;
      std::optional<SampleMoments> ratio_mc;
      if (verify) {
        retention_mc = simulate_retention(e_alpha0, e_lambda, levels == 0 ? 0 : levels - 1, samples, rng);
        selection_mc = simulate_child_selection(e_gamma, indices, samples, rng);
        ratio_mc = simulate_sigma_ratio(e_p, e_q, 10.0, 0.0, samples, rng);
      }
      auto z = [](double est, double mc, double se) { return se > 0 ? (mc - est) / se : 0.0; };

      std::cout << "retention (alpha0=" << fmt(e_alpha0) << ", lambda=" << fmt(e_lambda) << ")\n";
      std::cout << "level,expected,variance" << (verify ? ",simulated,std_error,z" : "") << '\n';
      for (std::size_t l = 0; l < levels; ++l) {
        const double e = expected_retention(e_alpha0, e_lambda, l);
        std::cout << l << ',' << fmt(e, 10) << ',' << fmt(retention_variance(e_alpha0, e_lambda, l), 10);
        if (verify) {
          const auto& m = retention_mc[l];
          std::cout << ',' << fmt(m.value, 10) << ',' << fmt(m.std_error, 4) << ',' << fmt(z(e, m.value, m.std_error), 3);
        }
        std::cout << '\n';
      }
      std::cout << "child selection (gamma=" << fmt(e_gamma) << ")\n";
      std::cout << "index,expected,variance" << (verify ? ",simulated,std_error,z" : "") << '\n';
      for (std::size_t i = 1; i <= indices; ++i) {
        const double e = expected_child_selection(e_gamma, i);
        std::cout << i << ',' << fmt(e, 10) << ',' << fmt(child_selection_variance(e_gamma, i), 10);
        if (verify) {
          const auto& m = selection_mc[i - 1];
          std::cout << ',' << fmt(m.value, 10) << ',' << fmt(m.std_error, 4) << ',' << fmt(z(e, m.value, m.std_error), 3);
        }
        std::cout << '\n';
      }
      const SigmaRatio ratio = expected_sigma_ratio(e_p, e_q);
      std::cout << "sigma ratio (p=" << fmt(e_p) << ", q=" << fmt(e_q) << ")\n";
      std::cout << "mean," << fmt(ratio.mean, 10) << "\nvariance," << fmt(ratio.variance, 10) << '\n';
      if (ratio_mc) {
        std::cout << "simulated_mean," << fmt(ratio_mc->mean, 10) << ",std_error," << fmt(ratio_mc->mean_std_error, 4)
                  << "\nsimulated_variance," << fmt(ratio_mc->variance, 10) << ",std_error,"
                  << fmt(ratio_mc->variance_std_error, 4) << '\n';
      }
      const Regime regime = predict_regime(e_alpha0, e_lambda, e_gamma);
      std::cout << "regime: depth=" << to_string(regime.depth) << " width=" << to_string(regime.width) << '\n';
      return 0;
    }

    if (*sts) {
      const Dataset data = load_dataset(read_hierarchy(fs::path(hierarchy_file)), read_points(fs::path(points_file)));
      std::cout << stats_line(compute_stats(data.hierarchy)) << '\n';
      return 0;
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return *sts ? kExitRuntime : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
