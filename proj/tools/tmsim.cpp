#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "svg_plot.hpp"
#include "tmsim/verify/suites.hpp"

using json = nlohmann::ordered_json;
using namespace tmsim;

namespace {

// Exit codes: 0 pass, 1 contract violation, 2 usage or parse error.
constexpr int kPass = 0, kViolation = 1, kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TuringMachine load_tm(const std::string& path) {
  if (path.empty()) throw UsageError("--tm is required");
  return parse_tm(read_file(path));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

double num(const Real& x) { return x.to_double(); }

NoiseMode noise_mode(const std::string& s) {
  try {
    return parse_noise_mode(s);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

/// `key = value` lines become `--key=value` arguments placed right after the subcommand name,
/// so flags given on the command line (which come later) win.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& subcommands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::vector<std::string> extra;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    extra.push_back("--" + key + "=" + value);
  }
  std::size_t at = 0;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (std::find(subcommands.begin(), subcommands.end(), args[i]) != subcommands.end()) {
      at = i + 1;
      break;
    }
  if (at == 0) throw UsageError("a config file needs a subcommand");
  args.insert(args.begin() + static_cast<long>(at), extra.begin(), extra.end());
  return args;
}

json report_json(const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  j["pass"] = r.pass();
  j["worst_margin"] = r.worst_margin ? json(num(*r.worst_margin) + 0.0) : json(nullptr);
  j["seconds"] = r.seconds;
  if (r.evidence_only) j["evidence_only"] = true;
  j["notes"] = r.notes;
  json recs = json::array();
  for (auto& c : r.records) recs.push_back({{"id", c.id}, {"value", num(c.value)}, {"bound", num(c.bound)}, {"pass", c.pass}});
  j["records"] = recs;
  return j;
}

Configuration start_config(const TuringMachine& M, const std::string& input) { return initial_config(M, parse_word(M, input)); }

// ---- encode / decode ----

struct EncodeArgs {
  std::string tm, input, u, v, state;
  bool json_out = false;
};

int cmd_encode(const EncodeArgs& a) {
  auto M = load_tm(a.tm);
  Configuration c;
  if (!a.state.empty()) {
    c.u = parse_word(M, a.u);
    c.v = parse_word(M, a.v);
    auto it = std::find(M.states.begin(), M.states.end(), a.state);
    if (it == M.states.end()) throw UsageError("unknown state '" + a.state + "'");
    c.q = static_cast<int>(it - M.states.begin()) + 1;
  } else {
    c = start_config(M, a.input);
  }
  auto e = encode_config(M, c);
  if (a.json_out) {
    std::cout << json{{"c", e.c.get_str()}, {"y1", e.y1.get_str()}, {"y2", e.y2.get_str()}, {"q", e.q}}.dump(2) << "\n";
  } else {
    std::cout << "c = " << e.c.get_str() << "\n(y1, y2, q) = (" << e.y1.get_str() << ", " << e.y2.get_str() << ", " << e.q
              << ")\n";
  }
  return kPass;
}

struct DecodeArgs {
  std::string tm, code;
  bool json_out = false;
};

int cmd_decode(const DecodeArgs& a) {
  auto M = load_tm(a.tm);
  Nat code;
  if (code.set_str(a.code, 10) != 0 || code < 0) throw UsageError("--code must be a natural number");
  auto e = encoded_from_code(M, code);
  auto c = decode_code(M, code);
  std::string state = M.states[static_cast<std::size_t>(c.q - 1)];
  if (a.json_out) {
    std::cout << json{{"c", code.get_str()},          {"y1", e.y1.get_str()},         {"y2", e.y2.get_str()},
                      {"q", e.q},                     {"state", state},               {"u", word_text(M, c.u)},
                      {"v", word_text(M, c.v)},       {"halted", is_halted(M, c)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "(y1, y2, q) = (" << e.y1.get_str() << ", " << e.y2.get_str() << ", " << e.q << ")\n"
              << "state = " << state << (is_halted(M, c) ? " (halted)" : "") << "\nu = " << word_text(M, c.u)
              << "\nv = " << word_text(M, c.v) << "\n";
  }
  return kPass;
}

// ---- compile ----

struct CompileArgs {
  std::string tm, kernel, format = "infix";
  std::string delta = "0.1";
  bool emit_expr = false, smooth = false;
};

std::string render(const Expr& e, const std::string& format) { return format == "sexpr" ? to_sexpr(e) : to_infix(e); }

int cmd_compile(const CompileArgs& a) {
  if (a.format != "infix" && a.format != "sexpr") throw UsageError("--format must be infix or sexpr");
  if (!a.kernel.empty()) {
    Expr e = build_kernel(a.kernel);
    std::cout << render(e, a.format) << "\n";
    return kPass;
  }
  auto M = load_tm(a.tm);
  auto g = compile_map(M, Real(a.delta), a.smooth);
  std::cout << "machine: " << M.states.size() << " states, " << M.alphabet.size() << " symbols\n"
            << "delta budget: " << g.delta_budget().str(6) << "\n"
            << "j_contract: " << g.j_contract() << "\n"
            << "pipeline: sigma^[" << g.j_contract() << "] o Upsilon_3" << (a.smooth ? " (Psi -> r)" : "")
            << " o f_ref o Omega_3\n";
  if (a.emit_expr) {
    std::cout << "sigma stage:\n  " << render(g.sigma_stage(), a.format) << "\n";
    std::cout << "Upsilon_3 stage:\n  " << render(g.upsilon_stage(), a.format) << "\n";
    std::cout << "f_ref and Omega_3 are exact round-and-step stages\n";
  }
  return kPass;
}

// ---- iterate-map ----

struct IterateArgs {
  std::string tm, input, noise = "uniform", out;
  long steps = 20;
  std::string delta = "0.1", offset = "0.19";
  std::uint64_t seed = 1;
  bool smooth = false;
};

int cmd_iterate(const IterateArgs& a) {
  auto M = load_tm(a.tm);
  Real delta(a.delta);
  auto g = compile_map(M, delta, a.smooth);
  Nat c0 = encode_code(M, start_config(M, a.input));
  auto orbit = psi_orbit(M, c0, static_cast<std::size_t>(a.steps));
  std::vector<Real> xs;
  int status = kPass;
  std::string error;
  try {
    xs = iterate_noisy(g, Real(c0) + Real(a.offset), static_cast<std::size_t>(a.steps),
                       NoiseSpec(noise_mode(a.noise), delta, a.seed));
  } catch (const NotNearConfiguration& e) {
    status = kViolation;
    error = e.what();
  }
  std::ofstream out;
  if (!a.out.empty()) {
    out = open_out(a.out);
    out << "n,x,decoded,expected,margin\n";
  }
  long mismatches = 0;
  Real worst = 0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    auto near = nearest_integer(xs[n]);
    bool ok = near.n == orbit[n] && near.distance <= one_fifth();
    if (!ok) ++mismatches;
    worst = max(worst, near.distance);
    if (out) out << n << "," << xs[n].str(30) << "," << near.n.get_str() << "," << orbit[n].get_str() << "," << near.distance.str(10) << "\n";
  }
  if (mismatches) status = kViolation;
  json j{{"x0", c0.get_str()},    {"steps", a.steps},     {"delta", num(delta)},
         {"noise", a.noise},      {"j_contract", g.j_contract()}, {"mismatches", mismatches},
         {"worst_distance", num(worst)}, {"pass", status == kPass}};
  if (!error.empty()) j["error"] = error;
  std::cout << j.dump(2) << "\n";
  return status;
}

// ---- simulate-ode ----

struct SimulateArgs {
  std::string tm, input, noise = "none", out;
  long steps = 10;
  std::string delta = "0", offset = "0.19", gamma;
  std::uint64_t seed = 1;
  bool smooth = false;
};

int cmd_simulate(const SimulateArgs& a) {
  auto M = load_tm(a.tm);
  std::optional<Real> gamma;
  if (!a.gamma.empty()) gamma = Real(a.gamma);
  auto p = make_simulation_params(Real(a.delta), gamma);
  Nat c0 = encode_code(M, start_config(M, a.input));
  SimulateOptions o;
  auto mode = noise_mode(a.noise);
  o.noise = OdeNoise{mode, mode == NoiseMode::None ? Real(0) : p.delta, a.seed};
  o.smooth = a.smooth;
  Real off(a.offset);
  auto r = simulate_2d(M, p, c0, Real(c0) + off, Real(c0) - off, a.steps, o);
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    r.trajectory.write_csv(out);
  }
  json windows = json::array();
  for (auto& w : r.windows)
    windows.push_back({{"j", w.j}, {"expected", w.expected.get_str()}, {"sup_error", num(w.sup_error)}, {"eta", num(w.eta)}, {"pass", w.pass}});
  bool halting_ok = true;
  json j{{"x0", c0.get_str()}, {"gamma", num(p.gamma)}, {"delta", num(p.delta)}, {"eta", num(p.eta)}, {"l", p.l}, {"c", num(p.c1)},
         {"noise", a.noise}, {"windows", windows}};
  if (r.halting_step) {
    j["halting_step"] = *r.halting_step;
    j["halting_sup"] = num(*r.halting_sup);
    if (p.delta.is_zero()) halting_ok = *r.halting_sup <= one_fifth();
  }
  j["pass"] = r.pass && halting_ok;
  std::cout << j.dump(2) << "\n";
  return r.pass && halting_ok ? kPass : kViolation;
}

// ---- omega-ode ----

struct OmegaArgs {
  std::string which = "J21", out;
  long n_max = 30;
  bool self_tracking = false;
};

int cmd_omega(const OmegaArgs& a) {
  PairInverse which;
  if (a.which == "J21")
    which = PairInverse::J21;
  else if (a.which == "J22")
    which = PairInverse::J22;
  else
    throw UsageError("--which must be J21 or J22");
  if (a.n_max < 0) throw UsageError("--n-max must be >= 0");
  OmegaOptions o;
  o.self_tracking = a.self_tracking;
  auto tr = omega_tilde_trajectory(which, Real(a.n_max) + Real(0.5), o);
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    tr.write_csv(out);
  }
  int comp = which == PairInverse::J21 ? 1 : 2;
  json rows = json::array();
  bool all = true;
  for (long n = 0; n <= a.n_max; ++n) {
    Real want(unpair_component(Nat(n), 2, comp));
    Real raw = omega_tilde_raw(tr, Real(n));
    bool ok = abs(raw - want) <= Real(0.25) && abs(sigma(raw) - want) <= one_fifth();
    all = all && ok;
    rows.push_back({{"n", n}, {"expected", num(want)}, {"raw", num(raw)}, {"sigma", num(sigma(raw))}, {"pass", ok}});
  }
  std::cout << json{{"which", a.which}, {"variant", a.self_tracking ? "self-tracking" : "tracking"}, {"rows", rows}, {"pass", all}}.dump(2)
            << "\n";
  return all ? kPass : kViolation;
}

// ---- sphere ----

struct SphereArgs {
  std::string tm, input, out;
  std::string t_end = "3", delta = "0", kappa = "0.25", offset = "0.19";
  long samples = 200;
  bool bare = false;
};

int cmd_sphere(const SphereArgs& a) {
  auto M = load_tm(a.tm);
  if (Real(a.t_end).sign() <= 0) throw UsageError("--t-end must be positive");
  if (a.samples < 1) throw UsageError("--samples must be positive");
  auto p = make_simulation_params(Real(a.delta));
  auto F = simulating_sphere_field(M, p, true, a.bare ? Real(0) : Real(a.kappa));
  Nat c0 = encode_code(M, start_config(M, a.input));
  Real off(a.offset), tau_end(a.t_end);
  State x0{Real(c0) + off, Real(c0) - off};
  std::vector<Real> bps;
  for (long k = 1; Real(k) / 2 < tau_end; ++k) bps.push_back(Real(k) / 2);
  auto planar = integrate_planar(F, x0, tau_end, bps);
  auto tinv = tau_inv_trajectory(F, planar, tau_end);
  Real te = tinv.final_state()[0];
  auto chart = integrate_sphere(F, stereo(x0), te);
  std::ofstream out;
  if (!a.out.empty()) {
    out = open_out(a.out);
    out << "t,y0,y1,y2,decoded_code,margin\n";
  }
  auto orbit = psi_orbit(M, c0, static_cast<std::size_t>(std::ceil(num(tau_end))));
  bool ok = true;
  Real worst_norm = 0;
  for (long i = 0; i <= a.samples; ++i) {
    Real tau = tau_end * Real(i) / Real(a.samples);
    Real t = min(tinv.at(tau)[0], chart.t_end());
    State y = sphere_point(chart, t);
    State x = stereo_inv(y);
    auto near = nearest_integer(x[1]);
    worst_norm = max(worst_norm, abs(norm2(y) - 1));
    if (out)
      out << t.str(20) << "," << y[0].str(30) << "," << y[1].str(30) << "," << y[2].str(30) << "," << near.n.get_str() << ","
          << near.distance.str(10) << "\n";
  }
  json reads = json::array();
  for (long j = 0; Real(j) + Real(0.25) <= tau_end; ++j) {
    Real t = tinv.at(Real(j) + Real(0.25))[0];
    State x = stereo_inv(sphere_point(chart, t));
    auto near = nearest_integer(x[1]);
    bool good = near.n == orbit[static_cast<std::size_t>(j)] && near.distance <= Real(0.25);
    ok = ok && good;
    reads.push_back({{"j", j}, {"t", num(t)}, {"decoded", near.n.get_str()}, {"expected", orbit[static_cast<std::size_t>(j)].get_str()},
                     {"margin", num(near.distance)}, {"pass", good}});
  }
  // |h| near the pole along z2 = 0, at 1 - y0 = 10^-2 .. 10^-8; it must fall toward 0.
  json decay = json::array();
  for (auto& v : pole_decay_probe(F, Real(0.1), {Real(1), Real(0)})) decay.push_back(v.str(6));
  std::cout << json{{"x0", c0.get_str()}, {"kappa", a.bare ? 0.0 : num(Real(a.kappa))}, {"t_end_reparametrized", num(te)},
                    {"sphere_drift", num(worst_norm)}, {"pole_decay", decay}, {"reads", reads}, {"pass", ok}}
                   .dump(2)
            << "\n";
  return ok ? kPass : kViolation;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite, tm, input;
  std::string delta = "0.1";
  long steps = 0;
  std::uint64_t seed = 20240611;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<MachineCase> cases;
  if (!a.tm.empty())
    cases.push_back({a.tm, load_tm(a.tm), a.input});
  else
    cases = default_machine_cases();
  auto run = [&](const std::string& s) -> SuiteReport {
    if (s == "kernels") return suite_kernels(a.seed);
    if (s == "psi") return suite_psi_contraction(a.seed);
    if (s == "sigma") return suite_sigma_contraction(a.seed);
    if (s == "pairing") return suite_pairing(a.seed);
    if (s == "targeting") return suite_targeting(a.seed);
    if (s == "iteration") return suite_iteration(a.seed);
    if (s == "map") return suite_map(cases, Real(a.delta), a.steps > 0 ? a.steps : 20, decimal("0.19"), a.seed);
    if (s == "ode") {
      std::vector<Real> deltas{Real(0)};
      if (Real(a.delta).sign() > 0) deltas.push_back(Real(a.delta));
      return suite_ode(cases, deltas, a.steps > 0 ? a.steps : 10, a.seed);
    }
    if (s == "omega") return suite_omega(a.steps > 0 ? a.steps : 30);
    if (s == "sphere") return suite_sphere(a.seed);
    if (s == "growth") return suite_growth(a.seed);
    throw UsageError("unknown suite '" + s + "'");
  };
  static const std::vector<std::string> all{"kernels", "pairing", "targeting", "iteration", "map",
                                            "ode",     "omega",   "sphere",    "growth"};
  if (a.suite == "all") {
    json reports = json::array();
    bool ok = true;
    for (auto& s : all) {
      auto r = run(s);
      ok = ok && r.pass();
      reports.push_back(report_json(r));
    }
    std::cout << json{{"suite", "all"}, {"reports", reports}, {"pass", ok}}.dump(2) << "\n";
    return ok ? kPass : kViolation;
  }
  auto r = run(a.suite);
  std::cout << report_json(r).dump(2) << "\n";
  return r.pass() ? kPass : kViolation;
}

// ---- trace ----

struct TraceArgs {
  std::string tm, input, function = "2x", noise = "none", csv, svg;
  long steps = 6;
  std::string delta = "0", t_end = "4", x0 = "1", offset = "0.19";
  long per_unit = 64;
  std::uint64_t seed = 1;
};

int cmd_trace(const TraceArgs& a) {
  if (a.csv.empty() && a.svg.empty()) throw UsageError("trace needs --csv and/or --svg");
  if (a.per_unit < 1) throw UsageError("--per-unit must be positive");
  Trajectory tr;
  std::vector<plot::Step> steps;
  std::string title;
  Real t_end;
  bool log_scale = false;
  if (!a.tm.empty()) {
    auto M = load_tm(a.tm);
    auto p = make_simulation_params(Real(a.delta));
    Nat c0 = encode_code(M, start_config(M, a.input));
    SimulateOptions o;
    auto mode = noise_mode(a.noise);
    o.noise = OdeNoise{mode, mode == NoiseMode::None ? Real(0) : p.delta, a.seed};
    Real off(a.offset);
    auto r = simulate_2d(M, p, c0, Real(c0) + off, Real(c0) - off, a.steps, o);
    tr = r.trajectory;
    t_end = Real(a.steps) + Real(0.5);
    auto orbit = psi_orbit(M, c0, static_cast<std::size_t>(a.steps));
    for (long j = 0; j <= a.steps; ++j)
      steps.push_back({double(j), double(j) + 0.5, num(Real(orbit[static_cast<std::size_t>(j)]))});
    title = "two-phase simulation, x0 = " + c0.get_str();
  } else {
    std::function<Real(const Real&)> f;
    if (a.function == "2x")
      f = [](const Real& x) { return pow(Real(2), x); };
    else if (a.function == "x+1")
      f = [](const Real& x) { return x + 1; };
    else if (a.function == "3x")
      f = [](const Real& x) { return 3 * x; };
    else
      throw UsageError("--function must be 2x, x+1 or 3x");
    t_end = Real(a.t_end);
    tr = iterate_ode(f, Real(a.x0), t_end);
    Real v(a.x0);
    for (long k = 0; Real(k) <= t_end; ++k) {
      steps.push_back({double(k), std::min(double(k) + 0.5, num(t_end)), num(v)});
      v = f(v);
    }
    log_scale = a.function == "2x";
    title = "iterating " + a.function + " from " + a.x0;
  }
  plot::Series s1{"z1", "#1f77b4", true, {}, {}}, s2{"z2", "#d62728", false, {}, {}};
  std::ofstream csv;
  if (!a.csv.empty()) {
    csv = open_out(a.csv);
    csv << "t,z1,z2,target\n";
  }
  long n = static_cast<long>(std::llround(num(t_end) * double(a.per_unit)));
  for (long i = 0; i <= n; ++i) {
    Real t = min(Real(i) / Real(a.per_unit), t_end);
    State z = tr.at(t);
    // The target is only claimed on the windows [j, j + 1/2].
    std::string target;
    for (auto& st : steps)
      if (num(t) >= st.t_from && num(t) <= st.t_to) target = plot::fmt(st.value);
    if (csv) csv << t.str(12) << "," << z[0].str(20) << "," << z[1].str(20) << "," << target << "\n";
    s1.t.push_back(num(t));
    s1.v.push_back(num(z[0]));
    s2.t.push_back(num(t));
    s2.v.push_back(num(z[1]));
  }
  if (!a.svg.empty()) {
    auto out = open_out(a.svg);
    plot::write_svg(out, title, {s1, s2}, steps, log_scale);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust simulation of Turing machines by iterated maps and ODEs"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  long precision = 0;
  app.add_option("--precision", precision, "Mantissa bits (default 256, or TA_PRECISION_BITS)");
  std::string config_path;
  app.add_option("--config", config_path, "File of 'key = value' lines; command-line flags override it");

  EncodeArgs enc;
  auto* sc_enc = app.add_subcommand("encode", "Print the code c and (y1, y2, q) of a configuration");
  sc_enc->add_option("--tm", enc.tm, "Machine file")->required();
  sc_enc->add_option("--input", enc.input, "Input word (initial configuration)");
  sc_enc->add_option("--u", enc.u, "Word from the head rightward (with --state)");
  sc_enc->add_option("--v", enc.v, "Word left of the head, read leftward (with --state)");
  sc_enc->add_option("--state", enc.state, "State name for an explicit configuration");
  sc_enc->add_flag("--json", enc.json_out);

  DecodeArgs dec;
  auto* sc_dec = app.add_subcommand("decode", "Decode a configuration code");
  sc_dec->add_option("--tm", dec.tm, "Machine file")->required();
  sc_dec->add_option("--code", dec.code, "Configuration code")->required();
  sc_dec->add_flag("--json", dec.json_out);

  CompileArgs cmp;
  auto* sc_cmp = app.add_subcommand("compile", "Compile the robust map g_M or emit a kernel expression");
  sc_cmp->add_option("--tm", cmp.tm, "Machine file");
  sc_cmp->add_option("--delta", cmp.delta, "Noise budget in [0, 1/5)");
  sc_cmp->add_option("--kernel", cmp.kernel, "Emit one kernel: psi_correct, sigma, sigma_iter(l), s, gate_phi, pair2, upsilon_k(k)");
  sc_cmp->add_option("--format", cmp.format, "infix or sexpr");
  sc_cmp->add_flag("--emit-expr", cmp.emit_expr, "Print the closed-form stages");
  sc_cmp->add_flag("--smooth", cmp.smooth, "Replace Psi by r inside Upsilon_3");

  IterateArgs it;
  auto* sc_it = app.add_subcommand("iterate-map", "Iterate g_M under bounded noise and compare with the machine");
  sc_it->add_option("--tm", it.tm, "Machine file")->required();
  sc_it->add_option("--input", it.input, "Input word");
  sc_it->add_option("--steps", it.steps);
  sc_it->add_option("--delta", it.delta);
  sc_it->add_option("--noise", it.noise, "none, uniform, const+, const-, alternating");
  sc_it->add_option("--seed", it.seed);
  sc_it->add_option("--offset", it.offset, "Start offset from the code");
  sc_it->add_option("--out", it.out, "CSV trace");
  sc_it->add_flag("--smooth", it.smooth);

  SimulateArgs sim;
  auto* sc_sim = app.add_subcommand("simulate-ode", "Run the two-phase ODE simulator and check every window");
  sc_sim->add_option("--tm", sim.tm, "Machine file")->required();
  sc_sim->add_option("--input", sim.input);
  sc_sim->add_option("--steps", sim.steps);
  sc_sim->add_option("--delta", sim.delta, "Right-hand-side noise bound");
  sc_sim->add_option("--gamma", sim.gamma, "Targeting error (default (1/5 - delta/2)/2)");
  sc_sim->add_option("--noise", sim.noise);
  sc_sim->add_option("--seed", sim.seed);
  sc_sim->add_option("--offset", sim.offset);
  sc_sim->add_option("--out", sim.out, "CSV trajectory");
  sc_sim->add_flag("--smooth", sim.smooth);

  OmegaArgs om;
  auto* sc_om = app.add_subcommand("omega-ode", "Integrate the ODEs tracking the pairing inverses");
  sc_om->add_option("--which", om.which, "J21 or J22");
  sc_om->add_option("--n-max", om.n_max);
  sc_om->add_option("--out", om.out, "CSV trajectory");
  sc_om->add_flag("--self-tracking", om.self_tracking, "Drive x2 and s2 by (r(x1) - x1)^3 and (r(s1) - s1)^3; does not track");

  SphereArgs sph;
  auto* sc_sph = app.add_subcommand("sphere", "Transport the simulator to the 2-sphere and read the orbit back");
  sc_sph->add_option("--tm", sph.tm, "Machine file")->required();
  sc_sph->add_option("--input", sph.input);
  sc_sph->add_option("--t-end", sph.t_end, "End of the simulation time tau");
  sc_sph->add_option("--delta", sph.delta);
  sc_sph->add_option("--kappa", sph.kappa, "Radial damping in K");
  sc_sph->add_option("--samples", sph.samples);
  sc_sph->add_option("--offset", sph.offset);
  sc_sph->add_option("--out", sph.out, "CSV orbit: t, y0, y1, y2, decoded_code, margin");
  sc_sph->add_flag("--bare", sph.bare, "Use K = exp(-2/(1+r^2)) without damping");

  VerifyArgs ver;
  auto* sc_ver = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  sc_ver->add_option("--suite", ver.suite,
                     "kernels, psi, sigma, pairing, targeting, iteration, map, ode, omega, sphere, growth, all")
      ->required();
  sc_ver->add_option("--tm", ver.tm, "Machine file for map and ode");
  sc_ver->add_option("--input", ver.input);
  sc_ver->add_option("--delta", ver.delta);
  sc_ver->add_option("--steps", ver.steps);
  sc_ver->add_option("--seed", ver.seed);

  TraceArgs trc;
  auto* sc_trc = app.add_subcommand("trace", "Write trajectories as CSV and an SVG plot against the target staircase");
  sc_trc->add_option("--tm", trc.tm, "Machine file (otherwise iterate --function)");
  sc_trc->add_option("--input", trc.input);
  sc_trc->add_option("--function", trc.function, "2x, x+1 or 3x");
  sc_trc->add_option("--x0", trc.x0);
  sc_trc->add_option("--t-end", trc.t_end);
  sc_trc->add_option("--steps", trc.steps);
  sc_trc->add_option("--delta", trc.delta);
  sc_trc->add_option("--noise", trc.noise);
  sc_trc->add_option("--seed", trc.seed);
  sc_trc->add_option("--offset", trc.offset);
  sc_trc->add_option("--per-unit", trc.per_unit, "Samples per unit time");
  sc_trc->add_option("--csv", trc.csv);
  sc_trc->add_option("--svg", trc.svg);

  std::vector<std::string> names;
  for (auto* sc : app.get_subcommands([](CLI::App*) { return true; })) names.push_back(sc->get_name());
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, names);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (precision) {
      if (precision < 64) throw UsageError("--precision must be at least 64");
      set_default_precision(precision);
    }
    if (sc_enc->parsed()) return cmd_encode(enc);
    if (sc_dec->parsed()) return cmd_decode(dec);
    if (sc_cmp->parsed()) return cmd_compile(cmp);
    if (sc_it->parsed()) return cmd_iterate(it);
    if (sc_sim->parsed()) return cmd_simulate(sim);
    if (sc_om->parsed()) return cmd_omega(om);
    if (sc_sph->parsed()) return cmd_sphere(sph);
    if (sc_ver->parsed()) return cmd_verify(ver);
    if (sc_trc->parsed()) return cmd_trace(trc);
  } catch (const NotNearConfiguration& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kViolation;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kViolation;
  } catch (const NonConvergence& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kViolation;
  } catch (const StepUnderflow& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kViolation;
  } catch (const BlowUp& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kViolation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
