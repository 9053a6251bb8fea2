#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxlat/dispersion.hpp"
#include "maxlat/eigenmode.hpp"
#include "maxlat/errors.hpp"
#include "maxlat/fermi.hpp"
#include "maxlat/lattice.hpp"
#include "maxlat/media.hpp"
#include "maxlat/ucp.hpp"

namespace maxlat::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "maxlat/1";

// Input problems: exit code 1.
struct UsageError : Error {
  using Error::Error;
};

json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw UsageError(std::string("cannot read ") + what + " file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string(what) + " file '" + path + "' is not valid JSON: " + e.what());
  }
}

Media load_media(const RunConfig& c) {
  if (c.media_path.empty()) throw UsageError("--media is required for '" + c.command + "'");
  return read_json_file(c.media_path, "media").get<Media>();
}

double need_lambda(const RunConfig& c) {
  if (!c.lambda) throw UsageError("--lambda is required for '" + c.command + "'");
  if (!std::isfinite(*c.lambda)) throw UsageError("--lambda must be finite");
  return *c.lambda;
}

Rational parse_rational(const std::string& s) {
  if (s.find_first_of(".eE") != std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw UsageError("bad number '" + s + "'");
    return Rational(v);
  }
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw UsageError("bad number '" + s + "'");
  if (q.get_den() == 0) throw UsageError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

RVec3 parse_xi(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("--xi expects three comma-separated entries, got '" + text + "'");
  return {parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
}

std::vector<Site> load_kint(const RunConfig& c) {
  if (c.kint_path.empty()) return {Site{0, 0, 0}};
  const json j = read_json_file(c.kint_path, "K_int");
  if (!j.is_array()) throw UsageError("K_int file must hold a list of [n1,n2,n3] sites");
  return j.get<std::vector<Site>>();
}

void emit(const RunConfig& c, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write '" + c.out + "'");
  f << text;
}

json header(const RunConfig& c) { return {{"schema", kSchema}, {"command", c.command}}; }

int cmd_classify(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  const DerivedParams p = derive_params(media);
  json r = header(c);
  r["media"] = media;
  r["params"] = p;
  r["class"] = std::string(to_string(p.cls));
  if (p.cls != MediaClass::B0) {
    const auto n = normalize_a0(media);
    r["normalized"] = {{"media", n.media}, {"permutation", n.permutation}, {"swapped", n.swapped}};
  }
  const LambdaExtrema e = lambda_extrema(media, c.grid.value_or(0), c.tol.value_or(5e-3));
  r["extrema"] = to_json(e);
  r["lambda_plus"] = e.lambda_plus;
  r["lambda_minus"] = e.lambda_minus;
  if (c.lambda) {
    const QuadricModel q = quadric_model(media, need_lambda(c));
    r["quadric"] = to_json(q);
    r["quadric_case"] = to_string(q.kind);
    r["rank"] = q.rank;
    r["signature"] = q.signature;
  }
  emit(c, r, out);
  return e.agree ? 0 : 2;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  const int grid = c.grid.value_or(32);
  if (grid < 16) throw UsageError("spectrum needs --grid >= 16");
  const SpectrumSummary s = spectrum_summary(media, grid);
  json r = header(c);
  r["media"] = media;
  r["spectrum"] = to_json(s);
  emit(c, r, out);
  return s.double_zero_everywhere ? 0 : 2;
}

int cmd_fermi(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  const double lambda = need_lambda(c);
  const int grid = c.grid.value_or(64);
  if (grid < 2) throw UsageError("fermi needs --grid >= 2");
  FermiOptions opts;
  if (c.tol) opts.tol = *c.tol;
  const FermiSample s = sample_surface(media, lambda, grid, opts);
  json r = header(c);
  r["media"] = media;
  r["sample"] = to_json(s);
  const auto cls = derive_params(media).cls;
  if (cls != MediaClass::B3) r["singular"] = to_json(singular_points(media, lambda, grid));
  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw UsageError("cannot write '" + c.csv + "'");
    f << to_csv(s);
  }
  emit(c, r, out);
  return s.max_residual < opts.point_tol || s.points.empty() ? 0 : 2;
}

int cmd_eigenmode(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  const double lambda = need_lambda(c);
  const int grid = c.grid.value_or(64);
  json r = header(c);
  Vec3 v{};
  if (c.v_h) {
    if (c.v_h->size() != 3) throw UsageError("--vh expects three numbers");
    v = {(*c.v_h)[0], (*c.v_h)[1], (*c.v_h)[2]};
  } else {
    const VhChoice choice = choose_vh(media, lambda, grid, c.seed);
    v = choice.v_h;
    r["v_H_attempts"] = choice.attempts;
  }
  const Counterexample ce = build_counterexample(media, lambda, v, grid);
  const int r_max = grid / 2 - 1;
  const ShellReport shells = shell_report(ce.u_hat, r_max, r_max);
  r["eigenmode"] = to_json(ce, shells);
  r["shell_test_passed"] = passes_shell_test(ce.u_hat, std::min(8, r_max));
  emit(c, r, out);
  const double tol = c.tol.value_or(1e-9);
  const bool ok = ce.residual_support_radius <= 2 && ce.two_path_error <= tol &&
                  ce.numeric_outside < 1e-10 && ce.det_identity && ce.adjugate_identity;
  return ok ? 0 : 2;
}

int cmd_regimes(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  json r = header(c);
  r["media"] = media;
  r["class"] = std::string(to_string(derive_params(media).cls));
  r["lambda_plus"] = lambda_plus(media);
  r["lambda_minus"] = lambda_minus(media);
  json list = json::array();
  for (const auto& g : rellich_regimes(media)) {
    json hi = std::isinf(g.hi) ? json("inf") : json(g.hi);
    list.push_back({{"lo", g.lo}, {"hi", hi}, {"verdict", g.verdict}});
  }
  r["regimes"] = list;
  emit(c, r, out);
  return 0;
}

int cmd_ucp_cert(const RunConfig& c, std::ostream& out) {
  const Media media = load_media(c);
  const double lambda = need_lambda(c);
  std::vector<RVec3> xis;
  for (const auto& s : c.xi) xis.push_back(parse_xi(s));
  if (xis.empty()) xis.push_back({Rational(1), Rational(0), Rational(0)});
  UcpCertificate cert;
  cert.media = media;
  cert.lambda = lambda;
  cert.degree = degree_certificate(media, lambda, xis, !c.float_mode);
  if (c.box < 1) throw UsageError("--box must be positive");
  cert.cover = halfspace_cover(load_kint(c), Box::cube(c.box));
  json r = header(c);
  r["certificate"] = to_json(cert);
  emit(c, r, out);
  return cert.valid() ? 0 : 2;
}

int cmd_ucp_nulltest(const RunConfig& c, std::ostream& out) {
  const double lambda = need_lambda(c);
  NullVariant variant;
  if (c.variant == "anywhere") {
    variant = NullVariant::Anywhere;
  } else if (c.variant == "exterior") {
    variant = NullVariant::Exterior;
  } else {
    throw UsageError("--variant must be 'anywhere' or 'exterior'");
  }
  PerturbedMedia pm;
  if (c.planted) {
    pm = planted_violation(lambda).media;
  } else {
    const Media media = load_media(c);
    pm = c.perturbation_path.empty()
             ? PerturbedMedia(media)
             : perturbation_from_json(read_json_file(c.perturbation_path, "perturbation"), media);
  }
  NullTestOptions opts;
  opts.seed = c.seed;
  if (c.tol) opts.kernel_tol = *c.tol;
  const NullTestReport rep =
      finite_box_null_test(pm, lambda, load_kint(c), Box::cube(c.box), variant, opts);
  json r = header(c);
  r["media"] = pm.background;
  r["perturbation"] = perturbation_to_json(pm);
  r["planted"] = c.planted;
  r["nulltest"] = to_json(rep);
  emit(c, r, out);
  const bool violation = rep.verdict == "violation";
  return violation == c.planted ? 0 : 2;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string& cmd = config.command;
    if (cmd == "classify") return cmd_classify(config, out);
    if (cmd == "spectrum") return cmd_spectrum(config, out);
    if (cmd == "fermi") return cmd_fermi(config, out);
    if (cmd == "eigenmode") return cmd_eigenmode(config, out);
    if (cmd == "rellich-regimes") return cmd_regimes(config, out);
    if (cmd == "ucp-cert") return cmd_ucp_cert(config, out);
    if (cmd == "ucp-nulltest") return cmd_ucp_nulltest(config, out);
    err << "error: unknown command '" << cmd << "'\n";
    return 1;
  } catch (const InternalError& e) {
    err << "internal check failed: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete anisotropic Maxwell operator on Z^3: dispersion, Fermi sets, eigenmodes, UCP"};
  app.require_subcommand(1);
  RunConfig c;
  std::vector<double> vh;

  auto common = [&](CLI::App* sub, bool lambda) {
    sub->add_option("--media", c.media_path, "media JSON {\"epsilon\":[..],\"mu\":[..]}");
    if (lambda) sub->add_option("--lambda", c.lambda, "spectral level");
    sub->add_option("--grid", c.grid, "grid size N");
    sub->add_option("--tol", c.tol, "tolerance (meaning depends on the command)");
    sub->add_option("--out", c.out, "output JSON path (default stdout)");
    sub->add_option("--seed", c.seed, "random seed");
  };
  auto* classify = app.add_subcommand("classify", "class, derived parameters, lambda+-, quadric case");
  common(classify, true);
  auto* spectrum = app.add_subcommand("spectrum", "grid spectrum histogram");
  common(spectrum, false);
  auto* fermi = app.add_subcommand("fermi", "sample the real Fermi surface");
  common(fermi, true);
  fermi->add_option("--csv", c.csv, "write the point cloud as CSV");
  auto* eigen = app.add_subcommand("eigenmode", "build the critical-window eigenmode");
  common(eigen, true);
  eigen->add_option("--vh", vh, "v_H in the normalized frame (three numbers)")->expected(3);
  auto* regimes = app.add_subcommand("rellich-regimes", "Rellich regime table");
  common(regimes, false);
  auto* cert = app.add_subcommand("ucp-cert", "degree certificate and half-space cover");
  common(cert, true);
  cert->add_option("--xi", c.xi, "direction a,b,c (rationals allowed); repeatable");
  cert->add_option("--kint", c.kint_path, "JSON list of K_int sites (default origin)");
  cert->add_option("--box", c.box, "cover box radius");
  cert->add_flag("--float", c.float_mode, "floating-point coefficients");
  auto* null = app.add_subcommand("ucp-nulltest", "finite-box unique continuation test");
  common(null, true);
  null->add_option("--perturbation", c.perturbation_path, "perturbation JSON");
  null->add_option("--kint", c.kint_path, "JSON list of K_int sites (default origin)");
  null->add_option("--box", c.box, "box radius");
  null->add_option("--variant", c.variant, "anywhere | exterior");
  null->add_flag("--planted", c.planted, "planted-violation control (ignores --media)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!vh.empty()) c.v_h = vh;
  return run(c, out, err);
}

}  // namespace maxlat::cli
