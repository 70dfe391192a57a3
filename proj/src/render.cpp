#include "infcalc/render.hpp"

namespace infcalc {

namespace {

bool is_single_term(const Scalar& s) { return s.denominator().empty() && s.numerator().size() == 1; }

std::string rational_factor_text(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "(" + q.get_str() + ")";
}

// Rational base b with s = ln b, when one exists.
std::optional<mpq_class> exponential_base(const Scalar& s) {
  auto logs = s.as_log_combination();
  if (!logs) return std::nullopt;
  mpq_class base(1);
  for (const auto& [prime, coeff] : *logs) {
    if (coeff.get_den() != 1 || !coeff.get_num().fits_slong_p()) return std::nullopt;
    const long k = coeff.get_num().get_si();
    if (k > 4096 || k < -4096) return std::nullopt;
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), prime, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k > 0) {
      base *= power;
    } else {
      base /= power;
    }
  }
  base.canonicalize();
  return base;
}

std::string exponent_text(const mpq_class& e) {
  if (e.get_den() == 1 && e > 0) return e.get_num().get_str();
  return "(" + e.get_str() + ")";
}

// Appends `coeff * scale` using the "p*M/q" layout.
void append_term(std::string& out, const Scalar& coeff, const std::string& scale, bool leading) {
  mpq_class rational(1);
  std::string body;
  bool compound = false;
  if (auto q = coeff.as_rational()) {
    rational = *q;
  } else if (is_single_term(coeff)) {
    const ScalarTerm& t = coeff.numerator().front();
    rational = t.coeff;
    body = (coeff * Scalar(mpq_class(1 / t.coeff))).to_string();
  } else {
    compound = true;
  }

  if (compound) {
    out += leading ? "" : " + ";
    out += "(" + coeff.to_string() + ")";
    if (!scale.empty()) out += "*" + scale;
    return;
  }

  const bool negative = rational < 0;
  if (negative) rational = -rational;
  if (leading) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  std::string m = body;
  if (!scale.empty()) m = m.empty() ? scale : m + "*" + scale;
  if (m.empty()) {
    out += rational.get_str();
    return;
  }
  if (rational.get_num() != 1) out += rational.get_num().get_str() + "*";
  out += m;
  if (rational.get_den() != 1) out += "/" + rational.get_den().get_str();
}

}  // namespace

std::string render(const Scalar& s) { return s.to_string(); }

std::string render(const ScaleKey& key) {
  std::vector<std::string> parts;
  if (key.d == 1) {
    parts.emplace_back("lam^lam");
  } else if (key.d != 0) {
    parts.push_back("lam^(" + key.d.get_str() + "*lam)");
  }
  if (!key.s.is_zero()) {
    if (auto base = exponential_base(key.s)) {
      parts.push_back(rational_factor_text(*base) + "^lam");
    } else {
      parts.push_back("exp((" + key.s.to_string() + ")*lam)");
    }
  }
  if (key.e == 1) {
    parts.emplace_back("lam");
  } else if (key.e != 0) {
    parts.push_back("lam^" + exponent_text(key.e));
  }
  if (key.p == 1) {
    parts.emplace_back("ln(lam)");
  } else if (key.p != 0) {
    parts.push_back("ln(lam)^" + exponent_text(mpq_class(key.p)));
  }
  if (parts.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

std::string render(const LambdaExpr& x) {
  std::string out;
  bool leading = true;
  for (const auto& t : x.terms()) {
    append_term(out, t.coeff, t.key.is_constant() ? "" : render(t.key), leading);
    leading = false;
  }
  if (x.marker()) {
    out += leading ? "" : " + ";
    out += "O(" + render(x.marker()->scale) + ")";
    leading = false;
  }
  return leading ? "0" : out;
}

std::string render(const StandardPart& s) { return s.value.to_string(); }

}  // namespace infcalc
