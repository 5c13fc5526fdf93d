#include "ccdf/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ccdf/bands.hpp"
#include "ccdf/errors.hpp"
#include "ccdf/estimator.hpp"
#include "ccdf/experiments.hpp"
#include "ccdf/io.hpp"
#include "ccdf/plotdata.hpp"
#include "ccdf/report.hpp"
#include "ccdf/simulation.hpp"

namespace ccdf::cli {

namespace {

class ChecksFailed : public Error {
 public:
  using Error::Error;
};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw InvalidArgument("cannot parse " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

/// "start:stop:count"
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw InvalidArgument(what + " grid must be start:stop:count");
  const double count = parse_number(parts[2], what + " grid count");
  if (count < 1 || count != double(int(count)))
    throw InvalidArgument(what + " grid count must be a positive integer");
  return linspace(parse_number(parts[0], what + " grid start"), parse_number(parts[1], what + " grid stop"),
                  int(count));
}

std::pair<double, double> parse_range(const std::string& spec, const std::string& what) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw InvalidArgument(what + " must be lower:upper");
  return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

std::vector<double> parse_list(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_number(p, what));
  if (out.empty()) throw InvalidArgument(what + " is empty");
  return out;
}

struct DataOptions {
  std::string input;
  std::string model;
  long long n{500};
  std::uint64_t seed{1};
  std::string kernel{"epanechnikov"};
  std::string bandwidth{"auto"};
  int order{1};
  double denom_tol{1e-12};
  std::string x_grid{"-1:1:41"};
  std::string output{"-"};
  std::string format{"csv"};
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  auto* in = cmd->add_option("--input", o.input, "CSV file with header x,y");
  auto* model = cmd->add_option("--model", o.model, "simulate the sample from a model (m1|m2)");
  in->excludes(model);
  cmd->add_option("--n", o.n, "sample size when --model is used");
  cmd->add_option("--seed", o.seed, "seed when --model is used");
  cmd->add_option("--kernel", o.kernel, "epanechnikov|uniform|gaussian");
  cmd->add_option("--bandwidth", o.bandwidth, "number in (0,1) or auto (n^-1/5)");
  cmd->add_option("--order", o.order, "local polynomial order 0, 1 or 2");
  cmd->add_option("--denom-tol", o.denom_tol, "singularity guard for local denominators");
  cmd->add_option("--x-grid", o.x_grid, "evaluation points start:stop:count");
  cmd->add_option("--output", o.output, "output path, - for stdout");
}

Sample<double> load_sample(const DataOptions& o) {
  if (o.input.empty() == o.model.empty())
    throw InvalidArgument("give exactly one of --input or --model");
  if (!o.input.empty()) return ingest_csv(o.input);
  return draw(model_from_name(o.model), o.n, o.seed);
}

std::optional<SimModel> maybe_model(const DataOptions& o) {
  if (o.model.empty()) return std::nullopt;
  return model_from_name(o.model);
}

EstimatorConfig<double> make_config(const DataOptions& o, long long n) {
  EstimatorConfig<double> cfg;
  cfg.kernel = kernel_from_name(o.kernel);
  cfg.order = o.order;
  cfg.denom_tol = o.denom_tol;
  cfg.bandwidth = o.bandwidth == "auto" ? reference_bandwidth(n) : parse_number(o.bandwidth, "bandwidth");
  cfg.validate();
  return cfg;
}

/// Opens --output or falls back to the provided stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void emit_table(const BandTable<double>& table, const DataOptions& o, std::ostream& out,
                std::ostream& err) {
  Sink sink(o.output, out);
  if (o.format == "json")
    sink.stream() << band_to_json(table).dump(2) << '\n';
  else if (o.format == "csv")
    write_band_csv(sink.stream(), table);
  else
    throw InvalidArgument("unknown format '" + o.format + "' (csv|json)");
  err << "# kind=" << to_string(table.kind) << " n=" << table.n << " h=" << format_double(table.bandwidth)
      << " order=" << table.order << " kernel=" << table.kernel << " omitted=" << table.omitted << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local polynomial conditional cdf estimation with certainty bands", "ccdf"};
  app.require_subcommand(1);
  std::string active = "ccdf";
  std::function<void()> action;

  // simulate -----------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "draw a sample from m1 or m2 and write it as CSV");
  std::string sim_model;
  long long sim_n = 500;
  std::uint64_t sim_seed = 1;
  std::string sim_output = "-";
  sim->add_option("--model", sim_model, "m1|m2")->required();
  sim->add_option("--n", sim_n, "sample size");
  sim->add_option("--seed", sim_seed, "generator seed");
  sim->add_option("--output", sim_output, "output path, - for stdout");
  sim->callback([&] {
    active = "simulate";
    action = [&] {
      const auto sample = draw(model_from_name(sim_model), sim_n, sim_seed);
      Sink sink(sim_output, out);
      write_sample_csv(sink.stream(), sample);
    };
  });

  // bands --------------------------------------------------------------------
  DataOptions band_opts;
  std::string t_grid = "jumps";
  double epsilon = 0.0;
  bool inner = false, clip = false;
  auto* bands = app.add_subcommand("bands", "conditional cdf certainty band");
  add_data_options(bands, band_opts);
  bands->add_option("--t-grid", t_grid, "start:stop:count or jumps");
  bands->add_option("--epsilon", epsilon, "band inflation, 0 <= eps < 1");
  bands->add_flag("--inner", inner, "use the (1 - eps) multiplier instead of (1 + eps)");
  bands->add_flag("--clip", clip, "intersect the bounds with [0, 1]");
  bands->add_option("--format", band_opts.format, "csv|json");
  bands->callback([&] {
    active = "bands";
    action = [&] {
      const auto sample = load_sample(band_opts);
      const auto cfg = make_config(band_opts, sample.size());
      std::optional<std::vector<double>> tg;
      if (t_grid != "jumps") tg = parse_grid(t_grid, "t");
      const auto table = cdf_band(sample, parse_grid(band_opts.x_grid, "x"), tg, cfg, epsilon, clip, inner);
      emit_table(table, band_opts, out, err);
    };
  });

  // regression ---------------------------------------------------------------
  DataOptions reg_opts;
  std::string y_range;
  auto* reg = app.add_subcommand("regression", "regression function certainty band");
  add_data_options(reg, reg_opts);
  reg->add_option("--y-range", y_range, "response support lower:upper")->required();
  reg->add_option("--format", reg_opts.format, "csv|json");
  reg->callback([&] {
    active = "regression";
    action = [&] {
      const auto sample = load_sample(reg_opts);
      const auto cfg = make_config(reg_opts, sample.size());
      const auto [lo, hi] = parse_range(y_range, "y range");
      emit_table(regression_band(sample, parse_grid(reg_opts.x_grid, "x"), cfg, lo, hi), reg_opts, out, err);
    };
  });

  // quantile -----------------------------------------------------------------
  DataOptions q_opts;
  double alpha = 0.5;
  std::string density = "plugin";
  bool raw_curve = false;
  auto* quant = app.add_subcommand("quantile", "conditional quantile certainty band");
  add_data_options(quant, q_opts);
  quant->add_option("--alpha", alpha, "quantile level in (0, 1)");
  quant->add_option("--density", density, "plugin|oracle (oracle needs --model)");
  quant->add_flag("--raw-curve", raw_curve, "invert the raw rather than the monotonized curve");
  quant->add_option("--format", q_opts.format, "csv|json");
  quant->callback([&] {
    active = "quantile";
    action = [&] {
      const auto sample = load_sample(q_opts);
      const auto cfg = make_config(q_opts, sample.size());
      DensityProvider<double> provider;
      if (density == "plugin") {
        provider = [&](double x, double q) { return density_plugin(sample, x, q, cfg); };
      } else if (density == "oracle") {
        const auto model = maybe_model(q_opts);
        if (!model) throw InvalidArgument("--density oracle requires --model");
        provider = [m = *model, a = alpha](double x, double) {
          return true_densities(m, x, true_quantile(m, x, a));
        };
      } else {
        throw InvalidArgument("unknown density mode '" + density + "' (plugin|oracle)");
      }
      emit_table(quantile_band(sample, parse_grid(q_opts.x_grid, "x"), alpha, cfg, provider, raw_curve),
                 q_opts, out, err);
    };
  });

  // plotdata -----------------------------------------------------------------
  DataOptions plot_opts;
  std::string plot_t_grid = "jumps";
  double plot_eps = 0.0;
  bool plot_clip = false;
  std::string svg_path;
  auto* plot = app.add_subcommand("plotdata", "long-format CSV of estimate, bands and truth");
  add_data_options(plot, plot_opts);
  plot_opts.x_grid = "0:1:2";
  plot->add_option("--t-grid", plot_t_grid, "start:stop:count or jumps");
  plot->add_option("--epsilon", plot_eps, "band inflation, 0 <= eps < 1");
  plot->add_flag("--clip", plot_clip, "intersect the bounds with [0, 1]");
  plot->add_option("--svg", svg_path, "also write a static SVG to this path");
  plot->callback([&] {
    active = "plotdata";
    action = [&] {
      const auto sample = load_sample(plot_opts);
      const auto cfg = make_config(plot_opts, sample.size());
      std::optional<std::vector<double>> tg;
      if (plot_t_grid != "jumps") tg = parse_grid(plot_t_grid, "t");
      const auto table = cdf_band(sample, parse_grid(plot_opts.x_grid, "x"), tg, cfg, plot_eps, plot_clip);
      const auto model = maybe_model(plot_opts);
      const auto points = plot_points(table, model ? &*model : nullptr);
      Sink sink(plot_opts.output, out);
      write_plot_csv(sink.stream(), points);
      if (!svg_path.empty()) {
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw InvalidArgument("cannot write '" + svg_path + "'");
        write_plot_svg(svg, points);
      }
    };
  });

  // experiment ---------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "Monte-Carlo verification experiments");
  experiment->require_subcommand(1);
  struct ExpFlags {
    std::string model{"m1"}, kernel{"epanechnikov"}, bandwidth{"auto"}, n_list, interval{"-1:1"};
    std::string format{"json"}, output{"-"};
    int order{1}, grid_points{41};
    long long reps{0};
    std::uint64_t seed{1};
    unsigned threads{0};
    double epsilon{0.5}, t{0.5}, x{0.0};
    std::string h_list{"0.4,0.2,0.1,0.05"};
    bool strict{false};
  } ef;
  auto add_exp_flags = [&](CLI::App* c) {
    c->add_option("--model", ef.model, "m1|m2");
    c->add_option("--kernel", ef.kernel, "epanechnikov|uniform|gaussian");
    c->add_option("--format", ef.format, "json|text");
    c->add_option("--output", ef.output, "output path, - for stdout");
    c->add_flag("--strict", ef.strict, "exit with status 3 when a declared check fails");
  };
  auto add_mc_flags = [&](CLI::App* c) {
    add_exp_flags(c);
    c->add_option("--bandwidth", ef.bandwidth, "number in (0,1) or auto (n^-1/5 per n)");
    c->add_option("--order", ef.order, "estimator order");
    c->add_option("--n-list,--n", ef.n_list, "comma-separated sample sizes");
    c->add_option("--reps", ef.reps, "replications per sample size");
    c->add_option("--seed", ef.seed, "master seed");
    c->add_option("--threads", ef.threads, "worker threads (0 = all cores); results do not depend on it");
    c->add_option("--interval", ef.interval, "compact interval I as lower:upper");
    c->add_option("--grid-points", ef.grid_points, "number of x grid points on I");
  };
  auto* e_sup = experiment->add_subcommand("sup", "normalized sup deviation Lambda_n");
  add_mc_flags(e_sup);
  auto* e_cov = experiment->add_subcommand("coverage", "simultaneous band coverage");
  add_mc_flags(e_cov);
  e_cov->add_option("--epsilon", ef.epsilon, "0 < eps < 1");
  auto* e_boc = experiment->add_subcommand("bochner", "small-bandwidth limits of f_{n,j}, r_{n,j}");
  add_exp_flags(e_boc);
  e_boc->add_option("--x", ef.x, "evaluation point");
  e_boc->add_option("--t", ef.t, "response level for r_{n,j}");
  e_boc->add_option("--h-list", ef.h_list, "comma-separated bandwidths");
  auto* e_em = experiment->add_subcommand("em-constant", "rate-normalized sup deviation vs its limit constant");
  add_mc_flags(e_em);
  e_em->add_option("--t", ef.t, "level for the fixed-t statistic");

  auto experiment_action = [&](const std::string& kind) {
    active = "experiment " + kind;
    action = [&, kind] {
      ExperimentReport report;
      if (kind == "bochner") {
        std::vector<double> hs = parse_list(ef.h_list, "bandwidth list");
        report = bochner_check(model_from_name(ef.model), ef.x, hs, kernel_from_name(ef.kernel), ef.t);
      } else {
        ExperimentOptions opts;
        opts.model = model_from_name(ef.model);
        opts.kernel = kernel_from_name(ef.kernel);
        opts.order = ef.order;
        if (ef.bandwidth != "auto") opts.bandwidth = parse_number(ef.bandwidth, "bandwidth");
        opts.seed = ef.seed;
        opts.threads = ef.threads;
        const auto [lo, hi] = parse_range(ef.interval, "interval");
        opts.interval = {lo, hi};
        opts.grid_points = ef.grid_points;
        opts.epsilon = ef.epsilon;
        opts.fixed_t = ef.t;
        std::string n_list = ef.n_list;
        if (kind == "sup") {
          opts.replications = ef.reps ? ef.reps : 50;
          if (n_list.empty()) n_list = "200,5000";
        } else if (kind == "coverage") {
          opts.replications = ef.reps ? ef.reps : 100;
          if (n_list.empty()) n_list = "200,2000";
        } else {
          opts.replications = ef.reps ? ef.reps : 30;
          if (n_list.empty()) n_list = "5000";
        }
        opts.n_list.clear();
        for (const double n : parse_list(n_list, "n list")) {
          if (n < 2 || n != double((long long)n)) throw InvalidArgument("sample sizes must be integers >= 2");
          opts.n_list.push_back((long long)n);
        }
        if (kind == "sup") report = sup_experiment(opts);
        else if (kind == "coverage") report = coverage_experiment(opts);
        else report = em_constant_experiment(opts);
      }
      Sink sink(ef.output, out);
      if (ef.format == "json")
        sink.stream() << report_to_json(report).dump(2) << '\n';
      else if (ef.format == "text")
        sink.stream() << report_to_text(report);
      else
        throw InvalidArgument("unknown format '" + ef.format + "' (json|text)");
      if (ef.strict && !report.all_passed()) throw ChecksFailed("declared checks failed");
    };
  };
  e_sup->callback([&] { experiment_action("sup"); });
  e_cov->callback([&] { experiment_action("coverage"); });
  e_boc->callback([&] { experiment_action("bochner"); });
  e_em->callback([&] { experiment_action("em-constant"); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (action) action();
  } catch (const ChecksFailed& e) {
    err << "ccdf " << active << ": " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "ccdf " << active << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "ccdf " << active << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ccdf::cli
