// qbiject: construct, verify and inspect analytic bijections of Q in [0,1].

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qbiject/avoid.hpp"
#include "qbiject/construction.hpp"
#include "qbiject/error.hpp"
#include "qbiject/lex.hpp"
#include "qbiject/pila.hpp"
#include "qbiject/trace.hpp"
#include "qbiject/verify.hpp"

using namespace qbiject;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kNotClean = 1;
constexpr int kUsage = 2;
constexpr int kError = 3;

std::string digits(const mpz_class& v) { return std::to_string(mpz_sizeinbase(v.get_mpz_t(), 10)); }

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot read " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path);
  out << text;
}

struct ConstructArgs {
  std::string config_path;
  std::string mode = "basic";
  unsigned long depth = 21;
  unsigned long stages = 1;
  std::string schedule = "strict";
  unsigned long c = 2;
  std::string majorant;
  std::string exponent_budget;
  std::string avoid_path;
  bool no_avoid = false;
  std::string y_enum = "lex";
  std::string y_prefix;
  std::string slow = "2,1";
  std::uint64_t node_budget = kDefaultNodeBudget;
  std::string out = "trace.json";
};

Config config_from_args(const ConstructArgs& a) {
  if (!a.config_path.empty()) return config_from_json(read_json(a.config_path));
  Config c;
  c.mode = mode_from_name(a.mode);
  c.depth = a.depth;
  c.stages = a.stages;
  c.y_kind = enum_kind_from_name(a.y_enum);
  if (!a.y_prefix.empty()) {
    std::stringstream ss(a.y_prefix);
    std::string item;
    while (std::getline(ss, item, ',')) c.y_prefix.push_back(Rat::parse(item));
  }
  if (a.no_avoid) {
    c.avoid = AvoidFamily{};
  } else if (!a.avoid_path.empty()) {
    c.avoid = avoid_from_json(read_json(a.avoid_path));
  }
  if (a.schedule != "strict" && a.schedule != "scaled") {
    throw Error(Errc::invalid_argument, "--schedule must be strict or scaled");
  }
  c.schedule_strict = a.schedule == "strict";
  c.schedule_c = c.schedule_strict ? 48 : a.c;
  if (a.majorant == "apriori") c.majorant = MajorantMode::apriori;
  else if (a.majorant == "posterior") c.majorant = MajorantMode::posterior;
  else if (!a.majorant.empty()) throw Error(Errc::invalid_argument, "--majorant must be apriori or posterior");
  c.exponent_budget = a.exponent_budget.empty() ? default_exponent_budget() : parse_integer(a.exponent_budget);
  {
    const auto comma = a.slow.find(',');
    if (comma == std::string::npos) throw Error(Errc::invalid_argument, "--slow expects c,k");
    c.slow.c = Rat::parse(a.slow.substr(0, comma));
    c.slow.k = std::stoul(a.slow.substr(comma + 1));
  }
  c.node_budget = a.node_budget;
  return c;
}

void print_summary(const Trace& t) {
  std::cout << "mode: " << mode_name(t.config.mode) << "\n";
  if (t.config.mode == Mode::pila) {
    for (const auto& s : t.stages) {
      std::cout << "stage " << s.n << ": T = " << s.T.get_str() << ", b = " << s.b.get_str() << ", d = " << s.d
                << ", C_f(T) = " << (sgn(s.count) < 0 ? std::string("uncounted") : s.count.get_str()) << " >= " << s.s_ceil.get_str();
      if (s.stepped) std::cout << ", |Q| = " << s.q_size << ", case " << s.case_tag << ", z = " << s.z.str();
      std::cout << "\n";
    }
    if (t.halted) std::cout << "halted: " << *t.halted << "\n";
    return;
  }
  std::size_t odd = 0, even = 0;
  mpz_class max_node = 1, max_eps = 1, max_value = 1;
  for (const auto& s : t.steps) {
    odd += s.kind == "odd";
    even += s.kind == "even";
    max_node = std::max(max_node, s.node.den());
    max_value = std::max(max_value, s.value.den());
    if (s.eps) max_eps = std::max(max_eps, s.eps->den());
  }
  std::cout << "steps: " << t.steps.size() - 1 << " (3 seed records, " << odd << " odd, " << even << " even)\n"
            << "assigned pairs: " << t.steps.size() << "\n"
            << "largest denominators (decimal digits): node " << digits(max_node) << ", value " << digits(max_value)
            << ", eps " << digits(max_eps) << "\n";
  if (t.config.mode == Mode::heights) {
    std::cout << "height ledger: " << t.ledger["summary"].dump() << "\n";
    // Say up front whether one more step would still fit the exponent budget.
    Config next = t.config;
    next.depth = t.config.depth + (t.config.depth % 2 == 0 ? 2 : 1);
    try {
      precheck_schedule(next);
    } catch (const Error& e) {
      std::cout << "note: depth " << next.depth << " is out of reach: " << e.what() << "\n";
    }
  }
}

int cmd_construct(const ConstructArgs& a) {
  const Config cfg = config_from_args(a);
  Trace t;
  try {
    t = cfg.mode == Mode::pila ? run_pila(cfg) : run_construction(cfg);
  } catch (const Error& e) {
    if (e.code() == Errc::schedule_overflow) {
      std::cerr << e.what() << "\n"
                << "hint: strict heights runs reach depth 5 with the default budget; try "
                   "--schedule scaled --c 2 for deeper runs\n";
      return kError;
    }
    throw;
  }
  write_trace(t, a.out);
  print_summary(t);
  std::cout << "trace written to " << a.out << "\n";
  return kOk;
}

int cmd_verify(const std::string& path, const std::string& mode, const std::string& report_path, bool quiet) {
  const Trace t = read_trace(path);
  if (!mode.empty() && mode_from_name(mode) != t.config.mode) {
    std::cerr << "usage: trace is in " << mode_name(t.config.mode) << " mode, not " << mode << "\n";
    return kUsage;
  }
  VerifyReport rep;
  try {
    rep = verify_trace(t);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kError;
  }
  const auto j = rep.to_json();
  if (!report_path.empty()) write_text(report_path, j.dump(1) + "\n");
  if (!quiet) {
    for (const auto& e : rep.entries) {
      if (e.verdict != Verdict::pass) {
        std::cout << verdict_name(e.verdict) << ": " << e.id << " at " << e.location << " " << e.witness.dump() << "\n";
      }
    }
  }
  std::cout << "summary: " << j["summary"].dump() << "\n";
  return rep.clean() ? kOk : kNotClean;
}

int cmd_eval(const std::string& path, const std::string& qtext, long n_arg) {
  const Trace t = read_trace(path);
  const Rat q = Rat::parse(qtext);
  if (!q.in_unit()) throw Error(Errc::invalid_argument, "q must lie in [0,1]");
  if (t.config.mode == Mode::pila) {
    const auto fs = pila_partial_sums(t);
    const auto& last = t.stages.back();
    for (std::size_t i = 0; i < t.stages.size(); ++i) {
      if (t.stages[i].stepped && t.stages[i].z == q) {
        std::cout << t.stages[i].y.str() << "\n";
        return kOk;
      }
    }
    if (q.height() <= last.T && fs.size() >= t.stages.size()) {
      std::cout << fs[t.stages.size() - 1].eval(q).str() << "\n";
      return kOk;
    }
    std::cout << "undetermined: H(q) exceeds the last frozen threshold " << last.T.get_str() << "\n";
    return kOk;
  }
  if (const auto v = f_exact_at(t, q)) {
    std::cout << v->str() << "\n";
    return kOk;
  }
  const PartialSum f = partial_sum_from_steps(t.steps);
  const std::size_t depth = t.steps.size() - 1;
  const std::size_t n = n_arg < 0 ? depth : static_cast<std::size_t>(n_arg);
  if (n < 1 || n > depth) throw Error(Errc::invalid_argument, "n must lie in [1, depth]");
  const Rat v = f.eval_rat(q, n);
  const Rat tail = tail_bound(n);
  std::cout << "[" << (v - tail).str() << ", " << (v + tail).str() << "]\n";
  return kOk;
}

int cmd_export(const std::string& path, const std::string& format, long points, const std::string& out) {
  const Trace t = read_trace(path);
  if (format == "json") {
    write_text(out, trace_to_json(t).dump(1) + "\n");
    return kOk;
  }
  if (format != "csv") throw Error(Errc::invalid_argument, "--format must be csv or json");
  std::vector<std::pair<Rat, Rat>> pairs;
  if (t.config.mode == Mode::pila) {
    const auto fs = pila_partial_sums(t);
    const auto& last = t.stages.back();
    const Poly& f = fs.at(t.stages.size() - 1);
    const std::uint64_t avail = farey_count(last.T.get_ui());
    const std::uint64_t want = points < 0 ? std::min<std::uint64_t>(avail, 10000) : static_cast<std::uint64_t>(points);
    LexCursor cur;
    for (std::uint64_t i = 0; i < std::min(want, avail); ++i) {
      const Rat q = cur.next();
      pairs.emplace_back(q, f.eval(q));
    }
    if (points >= 0 && want > avail) std::cerr << "warning: only " << avail << " frozen points available\n";
  } else {
    for (const auto& s : t.steps) pairs.emplace_back(s.node, s.value);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return lex_cmp(a.first, b.first) < 0; });
    if (points >= 0) {
      if (static_cast<std::size_t>(points) > pairs.size()) {
        std::cerr << "warning: only " << pairs.size() << " assigned points available\n";
      } else {
        pairs.resize(static_cast<std::size_t>(points));
      }
    }
  }
  std::ostringstream os;
  os << "x,f_x\n";
  for (const auto& [x, y] : pairs) os << x.str() << "," << y.str() << "\n";
  write_text(out, os.str());
  return kOk;
}

int cmd_count(const std::string& path, const std::string& Ttext, long stage) {
  const Trace t = read_trace(path);
  if (t.config.mode != Mode::pila) throw Error(Errc::invalid_argument, "count needs a pila trace");
  const auto fs = pila_partial_sums(t);
  const std::size_t n = stage < 0 ? t.stages.size() - 1 : static_cast<std::size_t>(stage);
  if (n >= t.stages.size() || n >= fs.size()) throw Error(Errc::invalid_argument, "no such stage");
  const mpz_class T = parse_integer(Ttext);
  if (T > t.stages[n].T) {
    throw Error(Errc::stage_too_shallow, "T exceeds T_" + std::to_string(n) + " = " + t.stages[n].T.get_str());
  }
  std::cout << count_Cf(fs[n], T).get_str() << "\n";
  return kOk;
}

int cmd_enumerate(std::uint64_t count, const std::string& index_of, std::uint64_t scan) {
  if (!index_of.empty()) {
    const auto i = lex_index(Rat::parse(index_of));
    if (!i) throw Error(Errc::invalid_argument, "denominator beyond the indexable range");
    std::cout << *i << "\n";
    return kOk;
  }
  if (scan > 0) {
    const VerifyReport rep = asymptotic_suite(scan);
    std::cout << rep.to_json().dump(1) << "\n";
    return rep.clean() ? kOk : kNotClean;
  }
  LexCursor cur;
  for (std::uint64_t i = 0; i < count; ++i) std::cout << i << " " << cur.next().str() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact construction and verification of analytic bijections of Q in [0,1]"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Run a construction and write its trace");
  construct->add_option("--config", ca.config_path, "JSON config file (other options are then ignored)");
  construct->add_option("--mode", ca.mode, "basic | heights | pila")->check(CLI::IsMember({"basic", "heights", "pila"}));
  construct->add_option("--depth", ca.depth, "Last step index (basic, heights)");
  construct->add_option("--stages", ca.stages, "Number of pila steps; thresholds T_0..T_N are reported");
  construct->add_option("--schedule", ca.schedule, "strict | scaled")->check(CLI::IsMember({"strict", "scaled"}));
  construct->add_option("--c", ca.c, "Base of the scaled schedule X(t) = c^t (t-1)!");
  construct->add_option("--majorant", ca.majorant, "apriori | posterior (heights even steps)");
  construct->add_option("--exponent-budget", ca.exponent_budget, "Largest majorant exponent allowed");
  construct->add_option("--avoid", ca.avoid_path, "Avoid family JSON (default: built-in LFT family)");
  construct->add_flag("--no-avoid", ca.no_avoid, "Use an empty avoid family");
  construct->add_option("--y-enum", ca.y_enum, "lex | lex_desc")->check(CLI::IsMember({"lex", "lex_desc"}));
  construct->add_option("--y-prefix", ca.y_prefix, "Comma-separated targets placed first");
  construct->add_option("--slow", ca.slow, "s(T) = c (ln T)^k given as c,k");
  construct->add_option("--node-budget", ca.node_budget, "Largest node set a pila stage may use");
  construct->add_option("-o,--out", ca.out, "Trace output path");

  std::string trace_path, vmode, report_path;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "Replay a trace and check every invariant");
  verify->add_option("trace", trace_path)->required();
  verify->add_option("--mode", vmode, "Expected mode")->check(CLI::IsMember({"basic", "heights", "pila"}));
  verify->add_option("--report", report_path, "Write the JSON report here");
  verify->add_flag("-q,--quiet", quiet, "Only print the summary");

  std::string qtext;
  long n_eval = -1;
  auto* eval = app.add_subcommand("eval", "Exact value at an assigned point, otherwise an enclosure");
  eval->add_option("trace", trace_path)->required();
  eval->add_option("q", qtext)->required();
  eval->add_option("--n", n_eval, "Partial sum used for the enclosure (default: all)");

  std::string format = "csv", out_path;
  long points = -1;
  auto* exp = app.add_subcommand("export", "Dump graph points");
  exp->add_option("trace", trace_path)->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--points", points, "Number of points (default: all)");
  exp->add_option("-o,--out", out_path, "Output file (default: stdout)");

  std::string Ttext;
  long stage = -1;
  auto* count = app.add_subcommand("count", "Exact C_f(T) for a pila stage");
  count->add_option("trace", trace_path)->required();
  count->add_option("--T", Ttext)->required();
  count->add_option("--stage", stage, "Stage index (default: last)");

  std::uint64_t enum_count = 10, scan = 0;
  std::string index_of;
  auto* enumerate = app.add_subcommand("enumerate", "Lexicographic enumeration of Q in [0,1]");
  enumerate->add_option("--count", enum_count, "Print x_0 .. x_{count-1}");
  enumerate->add_option("--index-of", index_of, "Print the index of a rational");
  enumerate->add_option("--scan", scan, "Run the height scan and asymptotic check up to n");

  std::string avoid_out;
  auto* avoid = app.add_subcommand("avoid-defaults", "Write the built-in avoid family as JSON");
  avoid->add_option("-o,--out", avoid_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) return cmd_construct(ca);
    if (*verify) return cmd_verify(trace_path, vmode, report_path, quiet);
    if (*eval) return cmd_eval(trace_path, qtext, n_eval);
    if (*exp) return cmd_export(trace_path, format, points, out_path);
    if (*count) return cmd_count(trace_path, Ttext, stage);
    if (*enumerate) return cmd_enumerate(enum_count, index_of, scan);
    if (*avoid) {
      write_text(avoid_out, avoid_to_json(default_avoid_family()).dump(1) + "\n");
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == Errc::invalid_argument ? kUsage : kError;
  }
  return kUsage;
}
