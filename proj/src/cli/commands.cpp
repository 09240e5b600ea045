#include "gausstele/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "gausstele/channel.hpp"
#include "gausstele/cli/profile.hpp"
#include "gausstele/cli/table.hpp"
#include "gausstele/error.hpp"
#include "gausstele/separability.hpp"
#include "gausstele/teleportation.hpp"
#include "gausstele/transmission.hpp"
#include "gausstele/verify.hpp"

namespace gausstele::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kCommands = {"threshold", "fidelity", "compare", "verify"};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Presets are expanded into ordinary flags before parsing, so a preset is
// exactly equivalent to typing its contents and explicit flags still win.

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::optional<std::string> preset_name(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--preset" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--preset=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::vector<std::string> expand_preset(std::vector<std::string> args) {
  const auto name = preset_name(args);
  if (!name) return args;
  Profile profile;
  try {
    profile = load_profile(*name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  auto command_it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  const auto wanted = profile.find("command");
  if (command_it == args.end()) {
    if (wanted == profile.end()) {
      throw UsageError("preset '" + *name + "' names no command; give one explicitly");
    }
    args.insert(args.begin(), wanted->second);
  } else if (wanted != profile.end() && wanted->second != *command_it) {
    throw UsageError("preset '" + *name + "' is for '" + wanted->second + "', not '" +
                     *command_it + "'");
  }
  for (const auto& [key, value] : profile) {
    if (key == "command" || has_flag(args, key)) continue;
    args.push_back("--" + key);
    std::istringstream tokens(value);
    for (std::string t; tokens >> t;) args.push_back(t);
  }
  return args;
}

// ---------------------------------------------------------------------------

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? " " : "") + format_number(values[i]);
  }
  return out;
}

std::vector<double> linspace(const std::vector<double>& range, const char* flag) {
  const double lo = range.at(0);
  const double hi = range.at(1);
  const double steps = range.at(2);
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError(std::string(flag) + ": need finite min <= max");
  }
  if (!(steps >= 1.0) || steps != std::floor(steps) || steps > 1e7) {
    throw UsageError(std::string(flag) + ": steps must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

void require_all_non_negative(const std::vector<double>& values, const char* flag) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw UsageError(std::string(flag) + ": values must be finite and non-negative");
    }
  }
}

struct Panel {
  double lambda;
  double n_th;
  double n_s;
};

// Zips equal-length lists; a list of length one is broadcast.
std::vector<Panel> zip_panels(const std::vector<double>& lambda, const std::vector<double>& nth,
                              const std::vector<double>& ns) {
  const std::size_t n = std::max({lambda.size(), nth.size(), ns.size()});
  for (const auto* list : {&lambda, &nth, &ns}) {
    if (list->empty() || (list->size() != 1 && list->size() != n)) {
      throw UsageError("--lambda, --nth and --ns must have equal lengths or length one");
    }
  }
  auto pick = [](const std::vector<double>& v, std::size_t i) { return v.size() == 1 ? v[0] : v[i]; };
  std::vector<Panel> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({pick(lambda, i), pick(nth, i), pick(ns, i)});
  return out;
}

struct ZetaChoice {
  enum class Mode { optimal, coherent, fixed } mode = Mode::optimal;
  double value = 0.0;

  std::optional<double> resolve() const {
    if (mode == Mode::optimal) return std::nullopt;
    return mode == Mode::coherent ? 0.0 : value;
  }
};

ZetaChoice parse_zeta(const std::string& text) {
  if (text == "max") return {};
  if (text == "coherent") return {ZetaChoice::Mode::coherent, 0.0};
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw UsageError("--zeta: expected 'max', 'coherent' or a number, got '" + text + "'");
  }
  return {ZetaChoice::Mode::fixed, v};
}

unsigned worker_count(unsigned requested) {
  return requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
}

// Fills rows[i] = make(i) on `threads` workers; order of the result is fixed.
template <class F>
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, unsigned threads, F&& make) {
  std::vector<std::vector<Cell>> rows(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) rows[i] = make(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    work(0, n);
  } else {
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w * chunk < n; ++w) {
      pool.emplace_back(work, w * chunk, std::min(n, (w + 1) * chunk));
    }
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

// Value of a closed form that is undefined at the edge of its domain.
template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const DomainError&) {
    return kNaN;
  }
}

struct CommonOptions {
  std::string preset;
  std::string format = "csv";
  double gamma = 1.0;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--preset", common.preset, "Named profile (fig1, fig2, fig4) or profile path");
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--gamma", common.gamma, "Damping rate; t columns are Gamma t / gamma")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
}

void emit(std::ostream& out, const Table& table, const CommonOptions& common) {
  if (common.format == "json") {
    write_json(out, table);
  } else {
    write_csv(out, table);
  }
}

std::vector<std::pair<std::string, std::string>> base_header(const std::string& command,
                                                             const CommonOptions& common) {
  std::vector<std::pair<std::string, std::string>> h{{"command", command}};
  if (!common.preset.empty()) h.emplace_back("preset", common.preset);
  h.emplace_back("gamma", format_number(common.gamma));
  return h;
}

// ---------------------------------------------------------------------------

struct ThresholdArgs {
  std::vector<double> lambda{0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
  std::vector<double> nth{1e-6, 1e-3, 0.1, 1.0};
  std::vector<double> ns_range{0.0, 1.0, 101.0};
  std::string form = "validated";
};

int cmd_threshold(const ThresholdArgs& a, const CommonOptions& common, std::ostream& out) {
  require_all_non_negative(a.lambda, "--lambda");
  require_all_non_negative(a.nth, "--nth");
  const std::vector<double> ns = linspace(a.ns_range, "--ns-range");
  require_all_non_negative(ns, "--ns-range");
  const ThresholdForm form = a.form == "printed" ? ThresholdForm::as_printed : ThresholdForm::validated;

  Table table;
  table.header = base_header("threshold", common);
  table.header.emplace_back("lambda", join(a.lambda));
  table.header.emplace_back("nth", join(a.nth));
  table.header.emplace_back("ns-range", join(a.ns_range));
  table.header.emplace_back("form", a.form);
  table.columns = {"lambda", "n_th", "n_s", "t_s", "t_0", "G"};

  const std::size_t per_panel = a.lambda.size() * ns.size();
  table.rows = parallel_rows(a.nth.size() * per_panel, worker_count(common.threads), [&](std::size_t i) {
    const double nth = a.nth[i / per_panel];
    const double lambda = a.lambda[(i % per_panel) / ns.size()];
    const double n_s = ns[i % ns.size()];
    const TwbSource src(lambda);
    const BathSpec bath(nth, n_s, common.gamma);
    const double ts = or_nan([&] { return threshold_time_ts(src, bath, form); });
    const double t0 = threshold_time_t0(src, nth);
    const double g = or_nan([&] { return squeezing_penalty_G(src, bath, form); });
    return std::vector<Cell>{lambda, nth, n_s, ts / common.gamma, t0 / common.gamma, g};
  });
  emit(out, table, common);
  return kExitSuccess;
}

struct FidelityArgs {
  std::vector<double> lambda{1.5};
  std::vector<double> nth{0.5};
  std::vector<double> ns{0.0, 0.1, 0.3, 0.7};
  std::vector<double> gt_range{0.0, 10.0, 1001.0};
  std::string zeta = "max";
};

int cmd_fidelity(const FidelityArgs& a, const CommonOptions& common, std::ostream& out) {
  require_all_non_negative(a.lambda, "--lambda");
  require_all_non_negative(a.nth, "--nth");
  require_all_non_negative(a.ns, "--ns");
  const std::vector<Panel> panels = zip_panels(a.lambda, a.nth, a.ns);
  const std::vector<double> gts = linspace(a.gt_range, "--gt-range");
  require_all_non_negative(gts, "--gt-range");
  const ZetaChoice zeta = parse_zeta(a.zeta);

  Table table;
  table.header = base_header("fidelity", common);
  table.header.emplace_back("lambda", join(a.lambda));
  table.header.emplace_back("nth", join(a.nth));
  table.header.emplace_back("ns", join(a.ns));
  table.header.emplace_back("gt-range", join(a.gt_range));
  table.header.emplace_back("zeta", a.zeta);
  table.columns = {"lambda", "n_th", "n_s", "gt", "t", "zeta", "f_input", "f_coherent", "gt_s"};

  table.rows = parallel_rows(panels.size() * gts.size(), worker_count(common.threads), [&](std::size_t i) {
    const Panel& p = panels[i / gts.size()];
    const double gt = gts[i % gts.size()];
    const TwbSource src(p.lambda);
    const BathSpec bath(p.n_th, p.n_s, common.gamma);
    const EvolvedTwinBeam twb = evolve_twb(src, bath, gt);
    const double z = zeta.resolve().value_or(optimal_zeta(twb));
    return std::vector<Cell>{p.lambda, p.n_th, p.n_s, gt, gt / common.gamma, z,
                             avg_fidelity_tele(z, twb), avg_fidelity_tele(0.0, twb),
                             threshold_time_ts(src, bath)};
  });
  emit(out, table, common);
  return kExitSuccess;
}

struct CompareArgs {
  std::vector<double> lambda{1.5};
  std::vector<double> nth{0.0, 0.3, 0.5, 0.5};
  std::vector<double> ns{0.0, 0.0, 0.0, 0.3};
  std::vector<double> delta_sq{0.1, 0.5, 1.0, 5.0};
  std::vector<double> gt_range{0.0, 3.0, 301.0};
  std::string zeta = "max";
};

int cmd_compare(const CompareArgs& a, const CommonOptions& common, std::ostream& out) {
  require_all_non_negative(a.lambda, "--lambda");
  require_all_non_negative(a.nth, "--nth");
  require_all_non_negative(a.ns, "--ns");
  require_all_non_negative(a.delta_sq, "--delta-sq");
  const std::vector<Panel> panels = zip_panels(a.lambda, a.nth, a.ns);
  const std::vector<double> gts = linspace(a.gt_range, "--gt-range");
  require_all_non_negative(gts, "--gt-range");
  const ZetaChoice zeta = parse_zeta(a.zeta);
  std::vector<AmplitudeEnsemble> ensembles;
  for (double d : a.delta_sq) ensembles.emplace_back(d);

  Table table;
  table.header = base_header("compare", common);
  table.header.emplace_back("lambda", join(a.lambda));
  table.header.emplace_back("nth", join(a.nth));
  table.header.emplace_back("ns", join(a.ns));
  table.header.emplace_back("delta-sq", join(a.delta_sq));
  table.header.emplace_back("gt-range", join(a.gt_range));
  table.header.emplace_back("zeta", a.zeta);
  table.columns = {"lambda", "n_th", "n_s", "gt", "t", "zeta", "f_tele"};
  for (double d : a.delta_sq) table.columns.push_back("f_dir_" + format_number(d));
  table.columns.push_back("delta_th_sq");
  table.columns.push_back("gt_s");

  table.rows = parallel_rows(panels.size() * gts.size(), worker_count(common.threads), [&](std::size_t i) {
    const Panel& p = panels[i / gts.size()];
    const double gt = gts[i % gts.size()];
    const TwbSource src(p.lambda);
    const BathSpec bath(p.n_th, p.n_s, common.gamma);
    const LinkComparison c = compare_links(src, bath, gt, ensembles, zeta.resolve());
    std::vector<Cell> row{p.lambda, p.n_th, p.n_s, gt, gt / common.gamma, c.zeta, c.f_tele};
    for (double f : c.f_direct) row.emplace_back(f);
    row.emplace_back(c.delta_threshold_sq);
    row.emplace_back(threshold_time_ts(src, bath));
    return row;
  });
  emit(out, table, common);
  return kExitSuccess;
}

struct VerifyArgs {
  std::size_t grid_size = 200;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::string inject_fault;
};

int cmd_verify(const VerifyArgs& a, const CommonOptions& common, std::ostream& out,
               std::ostream& err) {
  const auto names = verification_check_names();
  if (!a.inject_fault.empty() && a.inject_fault != "all" &&
      std::find(names.begin(), names.end(), a.inject_fault) == names.end()) {
    throw UsageError("--inject-fault: unknown check '" + a.inject_fault + "'");
  }
  VerifyOptions options;
  options.grid_size = a.grid_size;
  options.seed = a.seed;
  options.inject_fault = a.inject_fault;
  options.threads = common.threads;
  const VerifyReport report = run_verification(options);

  Table table;
  table.header = base_header("verify", common);
  table.header.emplace_back("grid-size", std::to_string(a.grid_size));
  table.header.emplace_back("seed", std::to_string(a.seed));
  if (!a.inject_fault.empty()) table.header.emplace_back("inject-fault", a.inject_fault);
  table.columns = {"check", "max_deviation", "tolerance", "samples", "status", "worst_case"};
  std::size_t passed = 0;
  for (const CheckResult& c : report.checks) {
    passed += c.passed() ? 1 : 0;
    table.rows.push_back({c.name, c.max_deviation, c.tolerance, static_cast<double>(c.samples),
                          std::string(c.passed() ? "pass" : "FAIL"),
                          c.passed() ? std::string() : c.worst_case});
  }
  emit(out, table, common);
  char summary[128];
  std::snprintf(summary, sizeof summary, "verify: %zu/%zu checks within tolerance in %.2f s\n",
                passed, report.checks.size(), report.elapsed_seconds);
  err << summary;
  return report.all_passed() ? kExitSuccess : kExitVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twin-beam teleportation through a squeezed-thermal bath", "gausstele"};
  app.require_subcommand(1);

  CommonOptions common;
  ThresholdArgs threshold;
  FidelityArgs fidelity;
  CompareArgs compare;
  VerifyArgs verify;

  auto* t = app.add_subcommand("threshold", "Separability time t_s, thermal t_0 and G = (t_s - t_0)/t_0");
  add_common(t, common);
  t->add_option("--lambda", threshold.lambda, "Twin-beam squeezing values")->capture_default_str();
  t->add_option("--nth", threshold.nth, "Thermal photon numbers (one panel each)")->capture_default_str();
  t->add_option("--ns-range", threshold.ns_range, "Bath squeezing photons: min max steps")
      ->expected(3)
      ->capture_default_str();
  t->add_option("--form", threshold.form, "t_s closed form")
      ->check(CLI::IsMember({"validated", "printed"}))
      ->capture_default_str();

  auto* f = app.add_subcommand("fidelity", "Average teleportation fidelity against Gamma t");
  add_common(f, common);
  f->add_option("--lambda", fidelity.lambda, "Twin-beam squeezing (zipped with --nth/--ns)")->capture_default_str();
  f->add_option("--nth", fidelity.nth, "Thermal photon numbers")->capture_default_str();
  f->add_option("--ns", fidelity.ns, "Bath squeezing photons")->capture_default_str();
  f->add_option("--gt-range", fidelity.gt_range, "Gamma t: min max steps")->expected(3)->capture_default_str();
  f->add_option("--zeta", fidelity.zeta, "Input squeezing: max, coherent or a number")->capture_default_str();

  auto* c = app.add_subcommand("compare", "Teleportation against direct transmission over twice the length");
  add_common(c, common);
  c->add_option("--lambda", compare.lambda, "Twin-beam squeezing (zipped with --nth/--ns)")->capture_default_str();
  c->add_option("--nth", compare.nth, "Thermal photon numbers, one per panel")->capture_default_str();
  c->add_option("--ns", compare.ns, "Bath squeezing photons, one per panel")->capture_default_str();
  c->add_option("--delta-sq", compare.delta_sq, "Amplitude ensemble widths")->capture_default_str();
  c->add_option("--gt-range", compare.gt_range, "Gamma t: min max steps")->expected(3)->capture_default_str();
  c->add_option("--zeta", compare.zeta, "Input squeezing: max, coherent or a number")->capture_default_str();

  auto* v = app.add_subcommand("verify", "Check every closed form against its numerical oracle");
  add_common(v, common);
  v->add_option("--grid-size", verify.grid_size, "Random tuples per check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  v->add_option("--seed", verify.seed, "Sampler seed")->capture_default_str();
  v->add_option("--inject-fault", verify.inject_fault,
                "Perturb one closed form (check name or 'all'); negative control");

  try {
    std::vector<std::string> args = expand_preset(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (t->parsed()) return cmd_threshold(threshold, common, out);
    if (f->parsed()) return cmd_fidelity(fidelity, common, out);
    if (c->parsed()) return cmd_compare(compare, common, out);
    return cmd_verify(verify, common, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

}  // namespace gausstele::cli
