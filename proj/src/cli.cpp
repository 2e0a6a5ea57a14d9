#include "ssent/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "ssent/asymptotics.hpp"
#include "ssent/distillnorm.hpp"
#include "ssent/error.hpp"
#include "ssent/numeric.hpp"
#include "ssent/probvec.hpp"
#include "ssent/singleshot.hpp"
#include "ssent/tensorpower.hpp"
#include "ssent/verify.hpp"

namespace ssent {

namespace {

using nlohmann::json;

// Shortest round-trip decimal, independent of the global locale.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidArgument(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path + ": " + e.what());
  }
}

std::vector<double> json_spectrum(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InvalidArgument(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw InvalidArgument(std::string("non-numeric entry in '") + key + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

struct Options {
  std::string schmidt;
  std::string target;
  std::optional<std::uint32_t> copies;
  std::optional<double> eps;
  std::string m;
  bool json_out = false;
  std::string out_path;
  std::string strategy = "bisect";
  std::uint64_t seed = VerifyOptions{}.seed;
  std::size_t cases = VerifyOptions{}.cases;
  std::string input;
  std::string ensemble;
  std::uint32_t n_min = 0;
  std::uint32_t n_max = 0;
  std::uint32_t n_step = 1;
  std::uint32_t geometric = 0;
  bool inject_fault = false;
};

struct State {
  std::vector<double> schmidt;
  ProbVec p;
  std::uint32_t copies;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  State state() const {
    std::vector<double> values;
    std::optional<std::uint32_t> copies = o_.copies;
    if (!o_.schmidt.empty()) {
      values = parse_list(o_.schmidt, "--schmidt");
    } else if (!o_.input.empty()) {
      const json j = read_json(o_.input);
      values = json_spectrum(j, "schmidt");
      if (!copies && j.contains("copies")) copies = j.at("copies").get<std::uint32_t>();
    } else {
      throw InvalidArgument("give the state with --schmidt or --input");
    }
    const std::uint32_t n = copies.value_or(1);
    if (n == 0) throw InvalidArgument("--copies must be at least 1");
    ProbVec p = make_prob_vec(values);
    return State{std::move(values), std::move(p), n};
  }

  double eps() const {
    if (o_.eps) return *o_.eps;
    if (!o_.input.empty()) {
      const json j = read_json(o_.input);
      if (j.contains("eps")) return j.at("eps").get<double>();
    }
    throw InvalidArgument("--eps is required");
  }

  SearchStrategy strategy() const {
    return o_.strategy == "scan" ? SearchStrategy::scan : SearchStrategy::bisect;
  }

  void emit(const json& j, const std::vector<std::pair<std::string, std::string>>& lines) const {
    if (o_.json_out) {
      out_ << j.dump() << '\n';
      return;
    }
    for (const auto& [key, value] : lines) out_ << key << " = " << value << '\n';
  }

  int single_shot(bool distill) const {
    const State s = state();
    const double e = eps();
    const TensorPowerSpectrum spec = build_spectrum(s.p, s.copies);
    const EntResult r = distill ? distill_eps(spec, e, strategy()) : cost_eps(spec, e, strategy());
    // Distillation thresholds eps itself, cost thresholds 1 - eps; report both
    // readings of the inequality so boundary cases are visible.
    SpectrumCursor cursor(spec, strategy());
    const double level = distill ? e : 1.0 - e;
    const BigInt strict = cursor.min_rank_above(level * (1.0 + kBoundaryRelTol));
    const BigInt loose = cursor.min_rank_with_tail_at_most((1.0 - level) * (1.0 + kBoundaryRelTol));
    const bool boundary = strict != loose;
    json j = {{"command", distill ? "distill" : "cost"},
              {"m", to_decimal(r.m)},
              {"log2_m", r.log2_m},
              {"eps", e},
              {"n", s.copies},
              {"boundary_flag", boundary},
              {"threshold_strict", to_decimal(strict)},
              {"threshold_nonstrict", to_decimal(loose)},
              {"schmidt", s.schmidt},
              {"copies", s.copies}};
    emit(j, {{"m", to_decimal(r.m)},
             {"log2_m", fmt(r.log2_m)},
             {"threshold_strict", to_decimal(strict)},
             {"threshold_nonstrict", to_decimal(loose)},
             {"boundary_flag", boundary ? "true" : "false"}});
    return kExitOk;
  }

  int tstar() const {
    const State s = state();
    if (o_.target.empty()) throw InvalidArgument("tstar needs --target");
    const std::vector<double> tv = parse_list(o_.target, "--target");
    const ProbVec q = make_prob_vec(tv);
    const StarDistance d = star_conversion_distance(s.p, q);
    json j = {{"command", "tstar"}, {"t_star", d.value}, {"k", d.k}, {"schmidt", s.schmidt}, {"target", tv}};
    emit(j, {{"t_star", fmt(d.value)}, {"k", std::to_string(d.k)}});
    return kExitOk;
  }

  int fidelity() const {
    const State s = state();
    if (o_.m.empty()) throw InvalidArgument("fidelity needs --m");
    const BigInt m = parse_decimal(o_.m);
    const TensorPowerSpectrum spec = build_spectrum(s.p, s.copies);
    const DistillFidelity f = fidelity_of_distillation(spec, m, strategy());
    json j = {{"command", "fidelity"}, {"m", to_decimal(m)},   {"k_star", to_decimal(f.k_star)},
              {"fidelity", f.fidelity}, {"n", s.copies},        {"schmidt", s.schmidt},
              {"copies", s.copies}};
    emit(j, {{"fidelity", fmt(f.fidelity)}, {"k_star", to_decimal(f.k_star)}, {"m", to_decimal(m)}});
    return kExitOk;
  }

  int regula() const {
    const State s = state();
    const double e = eps();
    const TensorPowerSpectrum spec = build_spectrum(s.p, s.copies);
    RegulaOptions opts;
    opts.strategy = strategy();
    const RegulaResult r = e_d_regula_search(spec, e, opts);
    json j = {{"command", "regula"},        {"log2_m", r.log2_m},   {"m", to_decimal(r.m)},
              {"k_star", to_decimal(r.k_star)}, {"fidelity", r.fidelity}, {"eps", e},
              {"n", s.copies},                {"schmidt", s.schmidt},   {"copies", s.copies}};
    emit(j, {{"log2_m", fmt(r.log2_m)},
             {"m", to_decimal(r.m)},
             {"k_star", to_decimal(r.k_star)},
             {"fidelity", fmt(r.fidelity)}});
    return kExitOk;
  }

  int hmax_cq() const {
    if (o_.ensemble.empty()) throw InvalidArgument("hmax-cq needs --ensemble");
    const json j = read_json(o_.ensemble);
    if (!j.contains("members") || !j.at("members").is_array()) throw InvalidArgument("missing array 'members'");
    std::vector<CqMember> members;
    for (const auto& mj : j.at("members")) {
      if (!mj.contains("weight") || !mj.at("weight").is_number()) throw InvalidArgument("member without numeric 'weight'");
      members.push_back(CqMember{mj.at("weight").get<double>(), make_prob_vec(json_spectrum(mj, "spectrum"))});
    }
    const CqEnsemble ens = CqEnsemble::make(std::move(members));
    const double e = eps();
    const std::size_t m = hmax_cond_cq_rank(ens, e);
    const double bits = std::log2(static_cast<double>(m));
    const double residual = pruning_residual(ens, m);
    json out = {{"command", "hmax-cq"}, {"hmax_bits", bits}, {"m", m}, {"eps", e}, {"pruning_residual", residual}};
    emit(out, {{"hmax_bits", fmt(bits)}, {"m", std::to_string(m)}, {"pruning_residual", fmt(residual)}});
    return kExitOk;
  }

  int asymptotics() const {
    const State s = state();
    const double e = eps();
    const AsymptoticEstimate c = second_order_cost(s.p, s.copies, e);
    const AsymptoticEstimate d = second_order_distill(s.p, s.copies, e);
    json j = {{"command", "asymptotics"}, {"H", c.entropy_H},        {"V", c.variance_V},
              {"z", c.z},                 {"est_cost", c.estimate},  {"est_distill", d.estimate},
              {"degenerate", c.degenerate}, {"eps", e},              {"n", s.copies}};
    emit(j, {{"H", fmt(c.entropy_H)},
             {"V", fmt(c.variance_V)},
             {"z", fmt(c.z)},
             {"est_cost", fmt(c.estimate)},
             {"est_distill", fmt(d.estimate)},
             {"degenerate", c.degenerate ? "true (V = 0, estimate is n H)" : "false"}});
    return kExitOk;
  }

  int sweep() const {
    const State s = state();
    const double e = eps();
    if (o_.n_min == 0 || o_.n_max == 0) throw InvalidArgument("sweep needs --n-min and --n-max >= 1");
    if (o_.n_min > o_.n_max) throw InvalidArgument("--n-min exceeds --n-max");
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("sweep needs eps in (0, 1)");
    std::vector<std::uint32_t> ns;
    for (std::uint64_t n = o_.n_min; n <= o_.n_max;) {
      ns.push_back(static_cast<std::uint32_t>(n));
      if (o_.geometric >= 2) {
        n *= o_.geometric;
      } else {
        if (o_.n_step == 0) throw InvalidArgument("--n-step must be positive");
        n += o_.n_step;
      }
    }

    std::ofstream file;
    if (!o_.out_path.empty()) {
      file.open(o_.out_path, std::ios::binary);
      if (!file) throw IoError("cannot write " + o_.out_path);
    }

    // Rows are independent; each builds its own spectrum serially.
    std::vector<std::string> rows(ns.size());
    std::vector<std::string> errors(ns.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ns.size()); ++i) {
      try {
        const std::uint32_t n = ns[static_cast<std::size_t>(i)];
        const TensorPowerSpectrum spec = build_spectrum(s.p, n, Execution::serial);
        const double ed = distill_eps(spec, e).log2_m;
        const double ec = cost_eps(spec, e).log2_m;
        const double sd = second_order_distill(s.p, n, e).estimate;
        const double sc = second_order_cost(s.p, n, e).estimate;
        const double root = std::sqrt(static_cast<double>(n));
        rows[static_cast<std::size_t>(i)] = std::to_string(n) + ',' + fmt(ed) + ',' + fmt(ec) + ',' + fmt(sd) + ',' +
                                            fmt(sc) + ',' + fmt(std::fabs(ed - sd) / root) + ',' +
                                            fmt(std::fabs(ec - sc) / root) + '\n';
      } catch (const std::exception& ex) {
        errors[static_cast<std::size_t>(i)] = ex.what();
      }
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (!errors[i].empty()) throw ResourceLimit("sweep row n=" + std::to_string(ns[i]) + ": " + errors[i]);
    }

    std::ostream& sink = o_.out_path.empty() ? out_ : static_cast<std::ostream&>(file);
    sink << "n,exact_distill,exact_cost,est_distill,est_cost,res_distill,res_cost\n";
    for (const auto& row : rows) sink << row;
    sink.flush();
    if (!sink) throw IoError("failed writing sweep output");
    return kExitOk;
  }

  int verify(std::ostream& err) const {
    VerifyOptions vo;
    vo.seed = o_.seed;
    vo.cases = o_.cases;
    vo.inject_fault = o_.inject_fault;
    const VerifyReport r = run_verify(vo);
    for (const auto& f : r.failures) err << "FAIL " << f << '\n';
    json j = {{"command", "verify"},        {"seed", o_.seed},
              {"cases", r.cases},           {"checks", r.checks},
              {"failures", r.failures.size()}, {"max_ky_fan_error", r.max_ky_fan_error}};
    emit(j, {{"cases", std::to_string(r.cases)},
             {"checks", std::to_string(r.checks)},
             {"failures", std::to_string(r.failures.size())},
             {"max_ky_fan_error", fmt(r.max_ky_fan_error)}});
    return r.ok() ? kExitOk : kExitVerifyFailed;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Single-shot entanglement quantities of pure bipartite states on n-fold tensor powers", "ssent"};
  app.set_version_flag("--version", "ssent 0.1.0");
  app.add_option("--schmidt", o.schmidt, "Schmidt coefficients, comma separated, any order");
  app.add_option("--target", o.target, "Target Schmidt coefficients for tstar");
  app.add_option("--copies", o.copies, "Number of copies n (default 1)");
  app.add_option("--eps", o.eps, "Error tolerance");
  app.add_option("--m", o.m, "Target dimension m (decimal integer)");
  app.add_flag("--json", o.json_out, "Print one JSON object instead of key = value lines");
  app.add_option("--out", o.out_path, "Output file (sweep)");
  app.add_option("--strategy", o.strategy, "Block search strategy")->check(CLI::IsMember({"scan", "bisect"}));
  app.add_option("--seed", o.seed, "Seed for verify");
  app.add_option("--cases", o.cases, "Number of verify cases");
  app.add_option("--input", o.input, "State file {\"schmidt\": [...], \"copies\": n, \"eps\": e}");
  app.add_option("--ensemble", o.ensemble, "Ensemble file {\"members\": [{\"weight\": w, \"spectrum\": [...]}]}");
  app.add_option("--n-min", o.n_min, "Smallest n of a sweep");
  app.add_option("--n-max", o.n_max, "Largest n of a sweep");
  app.add_option("--n-step", o.n_step, "Additive step of a sweep");
  app.add_option("--geometric", o.geometric, "Multiplicative step of a sweep (>= 2), overrides --n-step");
  app.add_flag("--inject-fault", o.inject_fault)->group("");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"distill", "eps-single-shot distillable entanglement"},
      {"cost", "eps-single-shot entanglement cost"},
      {"tstar", "star conversion distance from --schmidt to --target"},
      {"fidelity", "fidelity of distillation into Phi_m"},
      {"regula", "fidelity-based distillable entanglement"},
      {"hmax-cq", "conditional smoothed max-entropy of an ensemble"},
      {"asymptotics", "second-order estimates of cost and distillable entanglement"},
      {"sweep", "CSV of exact values against second-order estimates over n"},
      {"verify", "randomized comparison against brute-force oracles"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(1);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("ssent");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Runner run(o, out);
  try {
    if (cmd == "distill") return run.single_shot(true);
    if (cmd == "cost") return run.single_shot(false);
    if (cmd == "tstar") return run.tstar();
    if (cmd == "fidelity") return run.fidelity();
    if (cmd == "regula") return run.regula();
    if (cmd == "hmax-cq") return run.hmax_cq();
    if (cmd == "asymptotics") return run.asymptotics();
    if (cmd == "sweep") return run.sweep();
    return run.verify(err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << '\n';
    return kExitResourceGuard;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace ssent
