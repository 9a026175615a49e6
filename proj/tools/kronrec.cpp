#include "kronrec/density.hpp"
#include "kronrec/lattice_structure.hpp"
#include "kronrec/toeplitz.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace kronrec;

namespace {

constexpr const char* kSchema = "kronrec/1";

struct Args {
  std::string poly;
  std::string format = "json";
  std::string output;
  std::size_t m = 0;
  std::size_t m_max = 0;
  long p = 0;
  double eps = -1;
  std::string eps_text;
  std::size_t grid_n = 12;
  std::size_t max_ell = 4;
  bool force = false;
  std::size_t ell_max = 20;
  std::size_t n = 1;
  std::size_t r = 0;
  bool symbol = false;
  std::string pivot_rule = "nonnegative";
  std::string variant = "plain";
  std::string target;
  std::size_t random_targets = 0;
  std::uint64_t seed = 1;
  std::string subset = "1";
  std::size_t window = 10;
};

std::string rat(const Rational& q) { return to_string(q); }

json rat_matrix(const RatMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json int_matrix(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    out.push_back(row);
  }
  return out;
}

json enclosure(const Enclosure& e) {
  return {{"value", e.value}, {"error", e.error}, {"lower", e.lower()}, {"upper", e.upper()}};
}

json header(const std::string& command, const IntPolynomial* a) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  if (a) {
    json c = json::array();
    for (const auto& x : a->coeffs()) c.push_back(x.str());
    j["polynomial"] = c;
  }
  return j;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text)) {
    if (tok.find('/') != std::string::npos) {
      out.push_back(to_double(parse_rational(tok)));
      continue;
    }
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("invalid number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

RootOptions root_options() {
  RootOptions opt;
  if (const char* env = std::getenv("KRONREC_PRECISION")) {
    long digits = std::strtol(env, nullptr, 10);
    if (digits < 20 || digits > 100000)
      throw std::invalid_argument("KRONREC_PRECISION must be an integer >= 20");
    opt.initial_digits = static_cast<unsigned>(digits);
    opt.max_digits = std::max(opt.max_digits, opt.initial_digits * 8);
  }
  return opt;
}

void progress(const std::string& msg) { std::cerr << "[kronrec] " << msg << "\n"; }

// --- subcommands ----------------------------------------------------------

json cmd_mahler(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  const auto opt = root_options();
  json j = header("mahler", &a);
  std::vector<MahlerVariant> variants;
  if (args.variant == "all")
    variants = {MahlerVariant::plain, MahlerVariant::half_scaled, MahlerVariant::double_scaled,
                MahlerVariant::conjugate};
  else
    variants = {parse_mahler_variant(args.variant)};
  json rows = json::array();
  for (auto v : variants) {
    auto mm = mahler_measure(a, v, opt);
    rows.push_back({{"variant", std::string(to_string(v))}, {"value", mm.value}, {"error", mm.error}});
  }
  if (rows.size() == 1) {
    j["variant"] = rows[0]["variant"];
    j["value"] = rows[0]["value"];
    j["error"] = rows[0]["error"];
  } else {
    j["rows"] = rows;
  }
  json rts = json::array();
  for (const auto& r : roots(a, 1e-12, opt).roots)
    rts.push_back({{"re", r.value.real()}, {"im", r.value.imag()}, {"radius", r.radius},
                   {"multiplicity", r.multiplicity}});
  j["roots"] = rts;
  return j;
}

json cmd_bound(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  const auto opt = root_options();
  auto b = epsilon_bound(a, opt);
  auto f = factor_real(a, opt);
  json j = header("bound", &a);
  j["eps_half_scaled"] = enclosure(b.eps_half_scaled);
  j["eps_double_scaled"] = enclosure(b.eps_double_scaled);
  j["eps_stated"] = enclosure(b.eps_stated);
  j["eps_refined"] = enclosure(b.eps_refined);
  j["eps_refined_uses_conjugate"] = b.refined_uses_conjugate;
  j["eps_coarse"] = enclosure(b.eps_coarse);
  j["factorization"] = {{"b", f.b}, {"c", f.c}, {"delta", f.delta}, {"eps", enclosure(f.eps)}};
  return j;
}

json cmd_witness(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.m == 0) throw std::invalid_argument("witness needs --m");
  const auto opt = root_options();
  double eps = args.eps;
  if (eps < 0) eps = constructive_epsilon(a, opt).eps.upper();
  std::vector<std::vector<double>> targets;
  if (!args.target.empty()) targets.push_back(parse_reals(args.target));
  if (args.random_targets > 0) {
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < args.random_targets; ++i) {
      std::vector<double> t(args.m);
      for (auto& x : t) x = unit(rng);
      targets.push_back(std::move(t));
    }
  }
  if (targets.empty()) throw std::invalid_argument("witness needs --target or --random-targets");
  json j = header("witness", &a);
  j["m"] = args.m;
  j["eps"] = eps;
  json rows = json::array();
  double worst_norm = 0, worst_residual = 0;
  for (const auto& t : targets) {
    auto w = witness(a, args.m, t, eps, opt);
    json k = json::array();
    for (const auto& x : w.k) k.push_back(x.str());
    double norm = 0;
    for (double x : w.w) norm = std::max(norm, std::fabs(x));
    worst_norm = std::max(worst_norm, norm);
    worst_residual = std::max(worst_residual, w.residual);
    rows.push_back({{"target", w.target}, {"w", w.w}, {"k", k}, {"w_norm", norm}, {"residual", w.residual},
                    {"eps_constructive", w.eps_constructive}, {"used_conjugate", w.used_conjugate}});
  }
  j["max_w_norm"] = worst_norm;
  j["max_residual"] = worst_residual;
  j["rows"] = rows;
  return j;
}

json cmd_critical_eps(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.m == 0) throw std::invalid_argument("critical-eps needs --m");
  const std::size_t last = std::max(args.m, args.m_max);
  CriticalEpsilonOptions opt{args.grid_n, args.max_ell, args.force};
  json j = header("critical-eps", &a);
  j["grid_n"] = args.grid_n;
  json rows = json::array();
  for (std::size_t m = args.m; m <= last; ++m) {
    progress("critical-eps m=" + std::to_string(m));
    auto est = critical_epsilon(a, m, opt);
    rows.push_back({{"m", m}, {"lower", est.lower}, {"upper", est.upper}, {"grid_value", est.grid_value},
                    {"margin", est.margin}, {"constructive_cap", est.constructive_cap}, {"worst_target", est.worst_target},
                    {"notes", est.notes}});
  }
  j["rows"] = rows;
  return j;
}

json cmd_certify(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.m == 0) throw std::invalid_argument("certify-nondense needs --m");
  const Rational eps = parse_decimal(args.eps_text);
  const std::size_t last = std::max(args.m, args.m_max);
  json j = header("certify-nondense", &a);
  j["eps"] = rat(eps);
  json rows = json::array();
  for (std::size_t m = args.m; m <= last; ++m) {
    auto c = certify_non_density(a, m, eps);
    rows.push_back({{"m", m}, {"volume", rat(c.volume)}, {"volume_bound", c.volume_bound},
                    {"gram_bound", c.gram_bound}, {"certified", c.certified}});
  }
  if (rows.size() == 1) {
    for (auto& [k, v] : rows[0].items()) j[k] = v;
  } else {
    j["rows"] = rows;
  }
  return j;
}

json polygon_json(const NewtonPolygon& np) {
  json v = json::array(), s = json::array(), l = json::array();
  for (const auto& x : np.vertices) v.push_back({x.index, x.valuation});
  for (const auto& x : np.slopes) s.push_back(rat(x));
  for (auto x : np.lengths) l.push_back(x);
  return {{"p", np.p.str()}, {"vertices", v}, {"slopes", s}, {"lengths", l}, {"s", np.s}, {"s_strict", np.s_strict}};
}

json cmd_newton(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.p == 0) throw std::invalid_argument("newton needs --p");
  json j = header("newton", &a);
  const json polygon = polygon_json(newton_polygon(a, Integer(args.p)));
  for (auto& [k, v] : polygon.items()) j[k] = v;
  return j;
}

json cmd_basis(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.p == 0 || args.m == 0) throw std::invalid_argument("basis needs --p and --m");
  PivotRule rule;
  if (args.pivot_rule == "nonnegative") rule = PivotRule::nonnegative;
  else if (args.pivot_rule == "positive") rule = PivotRule::positive;
  else throw std::invalid_argument("unknown pivot rule '" + args.pivot_rule + "'");
  auto cb = canonical_basis_M(a, Integer(args.p), args.m, rule);
  json j = header("basis", &a);
  j["p"] = cb.p.str();
  j["m"] = cb.m;
  j["pivot_rule"] = args.pivot_rule;
  j["newton_polygon"] = polygon_json(cb.polygon);
  j["matrix"] = rat_matrix(cb.matrix);
  json val = json::array();
  for (const auto& row : cb.valuations) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.str());
    val.push_back(r);
  }
  j["valuations"] = val;
  json blocks = json::array();
  for (const auto& b : cb.blocks)
    blocks.push_back({{"k", b.k}, {"rows", {b.row_begin, b.row_end}}, {"b_identity", b.b_identity},
                      {"c_identity", b.c_identity}, {"det_valuation", b.det_valuation.str()},
                      {"expected_valuation", rat(b.expected_valuation)}});
  j["blocks"] = blocks;
  return j;
}

json cmd_index(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  if (args.m == 0) throw std::invalid_argument("index needs --m");
  auto lb = integral_basis(a, args.m);
  json j = header("index", &a);
  j["m"] = args.m;
  j["index"] = lb.index.str();
  j["expected"] = lb.expected.str();
  j["holds"] = lb.index == lb.expected;
  j["theta_basis"] = rat_matrix(lb.N);
  j["lambda_basis"] = int_matrix(lb.Z);
  j["transition"] = int_matrix(lb.W);
  return j;
}

LaurentSymbol symbol_from_args(const Args& args, json& j) {
  if (args.symbol) {
    std::vector<Rational> c;
    for (const auto& tok : split(args.poly)) c.push_back(parse_rational(tok));
    LaurentSymbol sym(std::move(c), args.r);
    j["symbol"] = sym.str();
    j["r"] = sym.r();
    return sym;
  }
  IntPolynomial b = parse_polynomial(args.poly);
  json c = json::array();
  for (const auto& x : b.coeffs()) c.push_back(x.str());
  j["b"] = c;
  LaurentSymbol sym = symbol_of(b);
  j["symbol"] = sym.str();
  j["r"] = sym.r();
  return sym;
}

json cmd_trench(const Args& args) {
  json j = header("trench", nullptr);
  LaurentSymbol sym = symbol_from_args(args, j);
  if (args.n < 1) throw std::invalid_argument("trench needs --n >= 1");
  auto t = trench_det(sym, args.n, root_options());
  Rational direct = toeplitz_det_direct(sym, args.n - 1);
  j["n"] = args.n;
  j["matrix_size"] = t.matrix_size;
  j["determinant_index"] = args.n - 1;
  j["trench_value"] = t.value;
  j["trench_error"] = t.error;
  if (t.exact) j["trench_exact"] = rat(*t.exact);
  j["direct"] = rat(direct);
  double dd = to_double(direct);
  j["relative_difference"] = dd == 0 ? std::fabs(t.value) : std::fabs(t.value - dd) / std::fabs(dd);
  json rts = json::array();
  for (const auto& r : t.roots) {
    json x = {{"re", to_double(r.value.re)}, {"im", to_double(r.value.im)}, {"multiplicity", r.multiplicity}};
    if (r.exact) x["exact"] = rat(*r.exact);
    rts.push_back(x);
  }
  j["roots"] = rts;
  j["digits"] = t.digits;
  return j;
}

json cmd_gram_growth(const Args& args) {
  IntPolynomial b = parse_polynomial(args.poly);
  json j = header("gram-growth", &b);
  auto mm = mahler_measure(b, MahlerVariant::plain, root_options());
  j["mahler_squared"] = mm.value * mm.value;
  std::vector<Rational> bq(b.coeffs().begin(), b.coeffs().end());
  json rows = json::array();
  const auto growth = toeplitz_growth(b, args.ell_max);
  for (const auto& g : growth) {
    json row = {{"ell", g.ell}, {"toeplitz_det", rat(g.det)}, {"ratio", g.ratio}};
    if (g.ell >= 1 && g.ell <= 12) {
      auto rows_b = band_rows(bq, g.ell);
      Rational gram = gram_det(rows_b).determinant;
      Rational bridge = growth[g.ell - 1].det;
      row["gram_det"] = rat(gram);
      row["bridge_holds"] = gram == bridge;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

json cmd_lyons(const Args& args) {
  IntPolynomial a = parse_polynomial(args.poly);
  std::vector<std::size_t> subset;
  if (!args.subset.empty() && args.subset != "none")
    for (const auto& tok : split(args.subset)) subset.push_back(static_cast<std::size_t>(std::stoul(tok)));
  json j = header("lyons", &a);
  j["subset"] = subset;
  progress("lyons ratios up to l=" + std::to_string(args.ell_max));
  auto rep = lyons_convergence(a, subset, args.ell_max);
  json rows = json::array();
  for (const auto& p : rep.points) rows.push_back({{"ell", p.ell}, {"ratio", to_double(p.ratio)}});
  const std::size_t lo = args.ell_max > args.window ? args.ell_max - args.window : 1;
  j["window"] = {lo, args.ell_max};
  j["fluctuation"] = rep.fluctuation(lo, args.ell_max);
  j["rows"] = rows;
  return j;
}

// --- output -----------------------------------------------------------------

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ";") + cell(x);
    return s;
  }
  return v.dump();
}

std::vector<std::vector<std::string>> tabulate(const json& j) {
  std::vector<std::vector<std::string>> table;
  if (j.contains("rows")) {
    std::vector<std::string> head;
    for (auto& [k, v] : j["rows"][0].items()) head.push_back(k);
    table.push_back(head);
    for (const auto& row : j["rows"]) {
      std::vector<std::string> r;
      for (const auto& k : head) r.push_back(row.contains(k) ? cell(row[k]) : "");
      table.push_back(r);
    }
    return table;
  }
  table.push_back({"key", "value"});
  for (auto& [k, v] : j.items()) {
    if (v.is_object()) {
      for (auto& [k2, v2] : v.items()) table.push_back({k + "." + k2, cell(v2)});
    } else {
      table.push_back({k, cell(v)});
    }
  }
  return table;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string render(const json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  auto table = tabulate(j);
  std::ostringstream os;
  if (format == "csv") {
    for (const auto& row : table) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::size_t> width(table[0].size(), 0);
  for (const auto& row : table)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t i = 0; i < table[r].size(); ++i) {
      os << (i ? "  " : "") << table[r][i];
      if (i + 1 < table[r].size()) os << std::string(width[i] - table[r][i].size(), ' ');
    }
    os << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      os << std::string(std::min<std::size_t>(total - 2, 100), '-') << "\n";
    }
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

json error_json(const std::string& type, const std::string& message) {
  json j;
  j["schema"] = kSchema;
  j["error"] = {{"type", type}, {"message", message}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kronrec: recurrence lattices, torus density and banded Toeplitz determinants"};
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* sub, bool positional = true) {
    if (positional) sub->add_option("poly", args.poly, "coefficients a_0,...,a_d (ascending)")->required();
    sub->add_option("--format", args.format, "json, csv or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--output", args.output, "write the report to a file");
  };

  auto* mahler = app.add_subcommand("mahler", "Mahler measure with certified error");
  common(mahler);
  mahler->add_option("--variant", args.variant, "plain, half_scaled, double_scaled, conjugate or all");

  auto* bound = app.add_subcommand("bound", "density bounds and the real factorization");
  common(bound);

  auto* wit = app.add_subcommand("witness", "constructive density witnesses");
  common(wit);
  wit->add_option("--m", args.m, "dimension")->required();
  wit->add_option("--eps", args.eps, "cube side (default: constructive epsilon)");
  wit->add_option("--target", args.target, "comma-separated target of length m");
  wit->add_option("--random-targets", args.random_targets, "number of uniform random targets");
  wit->add_option("--seed", args.seed, "seed for random targets");

  auto* crit = app.add_subcommand("critical-eps", "grid estimate of the critical epsilon");
  common(crit);
  crit->add_option("--m", args.m, "dimension (first of the sweep)")->required();
  crit->add_option("--m-max", args.m_max, "last dimension of the sweep");
  crit->add_option("--grid-n", args.grid_n, "grid points per torus coordinate")->check(CLI::PositiveNumber);
  crit->add_option("--max-ell", args.max_ell, "largest m - d allowed without --force");
  crit->add_flag("--force", args.force, "lift the grid guard");

  auto* cert = app.add_subcommand("certify-nondense", "volume certificate of non-density");
  common(cert);
  cert->add_option("--m", args.m, "dimension (first of the sweep)")->required();
  cert->add_option("--m-max", args.m_max, "last dimension of the sweep");
  cert->add_option("--eps", args.eps_text, "cube side in (0, 1], decimal or p/q")->required();

  auto* newton = app.add_subcommand("newton", "p-adic Newton polygon");
  common(newton);
  newton->add_option("--p", args.p, "prime")->required();

  auto* basis = app.add_subcommand("basis", "canonical p-adic basis of the recurrence lattice");
  common(basis);
  basis->add_option("--p", args.p, "prime")->required();
  basis->add_option("--m", args.m, "sequence length")->required();
  basis->add_option("--pivot-rule", args.pivot_rule, "nonnegative or positive");

  auto* index = app.add_subcommand("index", "integral bases and the index of the integer lattice");
  common(index);
  index->add_option("--m", args.m, "sequence length")->required();

  auto* trench = app.add_subcommand("trench", "banded Toeplitz determinant via Trench's formula");
  common(trench);
  trench->add_option("--n", args.n, "returns D_{n-1}, the determinant of order n")->required();
  trench->add_flag("--symbol", args.symbol, "read c_{-r},...,c_s instead of B");
  trench->add_option("--r", args.r, "lower band width for --symbol");

  auto* gram = app.add_subcommand("gram-growth", "Toeplitz determinants of B(x)B(1/x) and growth ratios");
  common(gram);
  gram->add_option("--ell-max", args.ell_max, "largest l");

  auto* lyons = app.add_subcommand("lyons", "Lyons-type Gram ratios over l");
  common(lyons);
  lyons->add_option("--subset", args.subset, "comma-separated 1-based indices, or 'none'");
  lyons->add_option("--ell-max", args.ell_max, "largest l");
  lyons->add_option("--window", args.window, "width of the fluctuation window ending at l_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::pair<CLI::App*, json (*)(const Args&)> table[] = {
      {mahler, cmd_mahler}, {bound, cmd_bound},     {wit, cmd_witness},      {crit, cmd_critical_eps},
      {cert, cmd_certify},  {newton, cmd_newton},   {basis, cmd_basis},      {index, cmd_index},
      {trench, cmd_trench}, {gram, cmd_gram_growth}, {lyons, cmd_lyons}};
  try {
    for (const auto& [sub, fn] : table)
      if (sub->parsed()) {
        emit(render(fn(args), args.format), args.output);
        return 0;
      }
  } catch (const kronrec::domain_error& e) {
    std::cerr << "kronrec: " << e.what() << "\n";
    std::cout << error_json("domain_error", e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kronrec: " << e.what() << "\n";
    std::cout << error_json("usage_error", e.what()).dump(2) << "\n";
    return 2;
  } catch (const numeric_failure& e) {
    std::cerr << "kronrec: " << e.what() << "\n";
    std::cout << error_json("numeric_failure", e.what()).dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "kronrec: " << e.what() << "\n";
    std::cout << error_json("internal_error", e.what()).dump(2) << "\n";
    return 3;
  }
  return 2;
}
