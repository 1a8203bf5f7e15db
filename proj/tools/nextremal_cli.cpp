#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nextremal/errors.hpp"
#include "nextremal/harness.hpp"

namespace {

using namespace nextremal;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitInconclusive = 3;

struct GlobalFlags {
  std::optional<std::string> config;
  std::optional<long> bits;
  std::optional<std::size_t> max_terms;
  std::optional<double> tail_tol;
};

struct FamilyFlags {
  std::string family;
  std::optional<std::string> q, a;
  std::optional<std::size_t> count;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("--family", f.family, "quartic, al_salam_carlitz (asc) or stieltjes_wigert (sw)")->required();
  cmd->add_option("--q", f.q, "q in (0, 1)");
  cmd->add_option("--a", f.a, "a in (1, 1/q), Al-Salam-Carlitz only");
}

// Keys may use dashes or underscores; flags given on the command line win.
PrecisionContext make_context(const GlobalFlags& g) {
  PrecisionContext ctx;
  if (g.config) {
    std::ifstream in(*g.config);
    if (!in) throw UsageError("cannot read config file " + *g.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      std::string k = key;
      std::replace(k.begin(), k.end(), '_', '-');
      if (k == "bits") {
        ctx.bits = value.get<long>();
      } else if (k == "max-terms") {
        ctx.max_terms = value.get<std::size_t>();
      } else if (k == "tail-tol") {
        ctx.tail_tol = value.get<double>();
      } else if (k == "bits-ceiling") {
        ctx.bits_ceiling = value.get<long>();
      } else if (k == "limit-tol") {
        ctx.limit_tol = value.get<double>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  }
  if (g.bits) ctx.bits = *g.bits;
  if (g.max_terms) ctx.max_terms = *g.max_terms;
  if (g.tail_tol) ctx.tail_tol = *g.tail_tol;
  if (ctx.bits_ceiling < ctx.bits) ctx.bits_ceiling = ctx.bits;
  ctx.validate();
  return ctx;
}

FamilyHandle make_family(const FamilyFlags& f, Bits bits) {
  FamilyHandle h;
  h.family = parse_family(f.family);
  if (f.q) h.q = QParameter::parse(*f.q, bits);
  if (f.a) h.a = Real::parse(*f.a, bits);
  if (f.count) h.atom_count = *f.count;
  h.validate();
  return h;
}

ExtReal parse_ext(const std::string& text, Bits bits) {
  if (text == "inf" || text == "infinity") return ExtReal::infinity(bits);
  return ExtReal(Real::parse(text, bits));
}

Complex parse_complex(const std::string& text, Bits bits) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--z expects <re>,<im>");
  return Complex(Real::parse(text.substr(0, comma), bits), Real::parse(text.substr(comma + 1), bits));
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int family_info(const FamilyFlags& f, const PrecisionContext& ctx) {
  FamilyModel model(make_family(f, ctx.bits), ctx);
  const Real F = model.friedrichs_value();
  std::cout << "family: " << model.handle().describe() << "\n";
  std::cout << "F(s): " << F.to_string(30) << "\n";
  std::cout << "alpha(s): " << (-1 / F).to_string(30) << "\n";
  std::cout << "xi(mu_F): " << xi(model.friedrichs()).to_string(30) << "\n";
  return kExitPass;
}

int measure_build(const FamilyFlags& f, const std::string& solution, const std::string& out,
                  const PrecisionContext& ctx) {
  FamilyModel model(make_family(f, ctx.bits), ctx);
  const FamilyHandle& h = model.handle();
  DiscreteMeasure m = [&] {
    if (solution == "friedrichs") return model.friedrichs();
    if (solution == "krein") return model.krein();
    if (solution.rfind("t=", 0) == 0) return model.solution(parse_ext(solution.substr(2), ctx.bits));
    if (solution.rfind("c=", 0) == 0) {
      if (h.family != Family::quartic) throw UsageError("c=<v> applies to the quartic family only");
      return quartic_mu_c(Real::parse(solution.substr(2), ctx.bits), h.atom_count, ctx);
    }
    throw UsageError("--solution expects friedrichs, krein, t=<v> or c=<v>");
  }();
  write_output(out, ends_with(out, ".csv") ? measure_to_csv(m) : measure_to_json(m, ctx.bits));
  return kExitPass;
}

int classify_cmd(const std::string& in_path, const std::optional<double>& alpha, std::size_t length,
                 const PrecisionContext& ctx) {
  std::ifstream in(in_path);
  if (!in) throw UsageError("cannot read " + in_path);
  std::stringstream buf;
  buf << in.rdbuf();
  DiscreteMeasure m = measure_from_json(buf.str(), ctx.bits);
  if (alpha) m = apply_density(m, inv_one_plus_x2_pow(Real(*alpha, ctx.bits)));
  DeterminacyVerdict v = classify_measure(m, length, ctx);
  std::cout << "verdict: " << to_string(v.verdict) << "\n"
            << "ratio: " << v.ratio << "\n"
            << "power_exponent: " << v.power_exponent << "\n"
            << "margin: " << v.margin << "\n"
            << "stieltjes: " << to_string(v.stieltjes) << "\n"
            << "terms: " << v.terms << "\n";
  if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
  return v.verdict == Verdict::inconclusive ? kExitInconclusive : kExitPass;
}

int nevanlinna_cmd(const FamilyFlags& f, const std::string& z_text, const std::string& t_text,
                   const PrecisionContext& ctx) {
  FamilyModel model(make_family(f, ctx.bits), ctx);
  const Complex z = parse_complex(z_text, ctx.bits);
  const ExtReal t = parse_ext(t_text, ctx.bits);
  auto n = nevanlinna_eval<Complex>(model.recurrence(), z, ctx);
  const Complex transform = t.infinite ? -(n.C / n.D) : -((n.A + n.C * t.value) / (n.B + n.D * t.value));
  std::cout << "A: " << to_string(n.A, 20) << "\n"
            << "B: " << to_string(n.B, 20) << "\n"
            << "C: " << to_string(n.C, 20) << "\n"
            << "D: " << to_string(n.D, 20) << "\n"
            << "AD-BC-1: " << n.identity_residual.to_string(3) << "\n"
            << "terms: " << n.terms_used << "\n"
            << "tail_bound: " << n.tail_bound.to_string(3) << "\n"
            << "stieltjes_transform: " << to_string(transform, 20) << "\n";
  return kExitPass;
}

int verify_cmd(const std::string& theorem, const FamilyFlags& f, const VerifyOptions& opts, const std::string& report,
               const std::string& format, const PrecisionContext& ctx) {
  VerificationReport r = verify(theorem, make_family(f, ctx.bits), ctx, opts);
  const bool csv = format == "csv" || (format.empty() && ends_with(report, ".csv"));
  write_output(report, csv ? report_to_csv(r) : report_to_json(r));
  if (!report.empty() && report != "-") {
    std::cout << r.theorem_id << " " << r.family << ": " << to_string(r.overall) << "\n";
  }
  switch (r.overall) {
    case Status::pass:
      return kExitPass;
    case Status::fail:
      return kExitFail;
    case Status::inconclusive:
      break;
  }
  return kExitInconclusive;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"N-extremal measures and indeterminate moment problems"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config, "JSON file with bits, max_terms, tail_tol, bits_ceiling, limit_tol");
  app.add_option("--bits", g.bits, "working precision in bits (default 256)");
  app.add_option("--max-terms", g.max_terms, "series term cap (default 4096)");
  app.add_option("--tail-tol", g.tail_tol, "relative truncation tolerance (default 1e-30)");

  std::function<int(const PrecisionContext&)> action;

  FamilyFlags info_flags;
  auto* family = app.add_subcommand("family", "family parameters");
  family->require_subcommand(1);
  auto* info = family->add_subcommand("info", "print F(s), alpha(s) and xi(mu_F)");
  add_family_flags(info, info_flags);
  info->callback([&] { action = [&](const PrecisionContext& c) { return family_info(info_flags, c); }; });

  FamilyFlags build_flags;
  std::string solution, out_path;
  auto* measure = app.add_subcommand("measure", "measure construction");
  measure->require_subcommand(1);
  auto* build = measure->add_subcommand("build", "write an N-extremal or quartic mu_c measure");
  add_family_flags(build, build_flags);
  build->add_option("--solution", solution, "friedrichs, krein, t=<v> or c=<v>")->required();
  build->add_option("--count", build_flags.count, "number of atoms");
  build->add_option("--out", out_path, "output .json or .csv path, - for stdout")->required();
  build->callback(
      [&] { action = [&](const PrecisionContext& c) { return measure_build(build_flags, solution, out_path, c); }; });

  std::string in_path;
  std::optional<double> alpha;
  std::size_t length = kMeasureRecurrenceLength;
  auto* classify = app.add_subcommand("classify", "determinacy of (1+x^2)^-alpha dmu");
  classify->add_option("--in", in_path, "measure JSON")->required();
  classify->add_option("--alpha", alpha, "density exponent in [0, 1]");
  classify->add_option("--length", length, "recurrence length");
  classify->callback([&] { action = [&](const PrecisionContext& c) { return classify_cmd(in_path, alpha, length, c); }; });

  FamilyFlags nev_flags;
  std::string z_text, t_text = "inf";
  auto* nev = app.add_subcommand("nevanlinna", "Nevanlinna functions");
  nev->require_subcommand(1);
  auto* eval = nev->add_subcommand("eval", "A, B, C, D and the Stieltjes transform of mu_t at z");
  add_family_flags(eval, nev_flags);
  eval->add_option("--z", z_text, "<re>,<im>")->required();
  eval->add_option("--t", t_text, "parameter t or inf");
  eval->callback([&] { action = [&](const PrecisionContext& c) { return nevanlinna_cmd(nev_flags, z_text, t_text, c); }; });

  FamilyFlags verify_flags;
  std::string theorem, report, format;
  std::optional<std::string> t_opt, t_prime_opt;
  bool runtime = false;
  auto* ver = app.add_subcommand("verify", "run the checks of one theorem");
  ver->add_option("--theorem", theorem, "T3.1, C3.2, T3.4, T3.5, T3.6/C3.7, P1.6, E1.10 or P3.2i")->required();
  add_family_flags(ver, verify_flags);
  ver->add_option("--count", verify_flags.count, "atoms per solution (at least 50 are used)");
  ver->add_option("--t", t_opt, "t of the finite-t solution");
  ver->add_option("--t-prime", t_prime_opt, "t' of T3.4");
  ver->add_option("--report", report, "output path (.json or .csv); stdout if omitted");
  ver->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  ver->add_flag("--runtime", runtime, "include wall-clock time in the report");
  ver->callback([&] {
    action = [&](const PrecisionContext& c) {
      VerifyOptions o;
      if (t_opt) o.t = Real::parse(*t_opt, c.bits);
      if (t_prime_opt) o.t_prime = parse_ext(*t_prime_opt, c.bits);
      o.include_runtime = runtime;
      return verify_cmd(theorem, verify_flags, o, report, format, c);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  try {
    return action(make_context(g));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
