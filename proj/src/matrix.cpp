#include "affinekit/matrix.hpp"

#include <cctype>
#include <sstream>

namespace affinekit {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Rational parse_decimal(const std::string& raw) {
  const std::string s = trim(raw);
  require(!s.empty(), ErrorKind::InvalidInput, "empty number");
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  require(!digits.empty(), ErrorKind::InvalidInput, "not a number: '" + raw + "'");
  long exponent = 0;
  if (i < s.size()) {
    require(s[i] == 'e' || s[i] == 'E', ErrorKind::InvalidInput, "not a number: '" + raw + "'");
    const std::string exp_text = s.substr(i + 1);
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == exp_text.size() && used > 0, ErrorKind::InvalidInput,
            "bad exponent in '" + raw + "'");
  }
  Integer numer(digits, 10);
  if (negative) numer = -numer;
  const long scale = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale >= 0 ? Rational(numer * ten_pow) : Rational(numer, ten_pow);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  require(den != 0, ErrorKind::InvalidInput, "zero denominator in '" + text + "'");
  return num / den;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      require(m(i, j).get_den() == 1, ErrorKind::InvalidInput, "entry is not an integer");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace affinekit
