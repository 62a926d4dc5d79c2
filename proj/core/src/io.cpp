#include "lrsca/io.hpp"

#include <cctype>
#include <cmath>

#include <json.hpp>

namespace lrsca {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::parse_error, what); }

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) negative = text[pos++] == '-';
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      parse_fail("not a number: '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) parse_fail("not a number: '" + std::string(text) + "'");
  mpz_class num(digits, 10);
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
  Rational q(negative ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

template <Scalar T>
T scalar_from_json(const json& v) {
  Rational q;
  if (v.is_string()) {
    q = parse_rational(v.get<std::string>());
  } else if (v.is_number_integer()) {
    if (v.is_number_unsigned()) {
      q = Rational(mpz_class(std::to_string(v.get<std::uint64_t>())));
    } else {
      q = Rational(mpz_class(std::to_string(v.get<std::int64_t>())));
    }
  } else if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) parse_fail("non-finite entry");
    if constexpr (std::same_as<T, double>) {
      return d;
    } else {
      q = Rational(d);
    }
  } else {
    parse_fail("matrix entries must be numbers or rational strings");
  }
  if constexpr (std::same_as<T, double>) {
    return q.get_d();
  } else {
    return q;
  }
}

template <Scalar T>
json scalar_to_json(const T& v) {
  if constexpr (std::same_as<T, Rational>) {
    return scalar_to_string(v);
  } else {
    return v;
  }
}

template <Scalar T>
Matrix<T> matrix_from_json(const json& v, const char* name) {
  if (!v.is_array()) parse_fail(std::string(name) + " must be an array of rows");
  std::vector<std::vector<T>> rows;
  for (const auto& row : v) {
    if (!row.is_array()) parse_fail(std::string(name) + " must be an array of rows");
    std::vector<T> out;
    for (const auto& e : row) out.push_back(scalar_from_json<T>(e));
    rows.push_back(std::move(out));
  }
  if (rows.empty()) return Matrix<T>();
  return Matrix<T>::from_rows(rows);
}

template <Scalar T>
json matrix_to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar T>
json decomposition_value(const Decomposition<T>& dec) {
  return json{{"D", matrix_to_json(dec.D)}, {"B", matrix_to_json(dec.B)}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

std::size_t read_size(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) parse_fail(std::string(key) + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  auto integer = [](std::string_view s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) return false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!integer(num) || !integer(den)) parse_fail("not a rational: '" + std::string(text) + "'");
  const mpz_class d(std::string(den[0] == '+' ? den.substr(1) : den), 10);
  if (d == 0) parse_fail("zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(std::string(num[0] == '+' ? num.substr(1) : num), 10), d);
  q.canonicalize();
  return q;
}

Backend detect_backend(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) parse_fail("instance file must be a JSON object");
  if (!j.contains("backend")) return Backend::exact;
  const auto& b = j.at("backend");
  if (b == "exact") return Backend::exact;
  if (b == "float") return Backend::floating;
  parse_fail("backend must be \"exact\" or \"float\"");
}

template <Scalar T>
std::string scalar_to_string(const T& v) {
  if constexpr (std::same_as<T, Rational>) {
    Rational c = v;
    c.canonicalize();
    return c.get_str();
  } else {
    return json(v).dump();
  }
}

template <Scalar T>
InstanceFile<T> parse_instance_file(std::string_view json_text, bool strict_rk) {
  const json j = parse_json(json_text);
  if (!j.is_object()) parse_fail("instance file must be a JSON object");
  if (j.contains("format_version") && j.at("format_version") != kFormatVersion) {
    parse_fail("unsupported format_version " + j.at("format_version").dump());
  }
  if (!j.contains("M")) parse_fail("missing field M");
  InstanceFile<T> f;
  try {
    f.M = matrix_from_json<T>(j.at("M"), "M");
    if (strict_rk) {
      f.r = read_size(j, "r");
      f.k = read_size(j, "k");
    } else {
      if (j.contains("r") && j.at("r").is_number_unsigned()) f.r = j.at("r").get<std::size_t>();
      if (j.contains("k") && j.at("k").is_number_unsigned()) f.k = j.at("k").get<std::size_t>();
    }
    if (j.contains("D")) f.D = matrix_from_json<T>(j.at("D"), "D");
    if (j.contains("B")) f.B = matrix_from_json<T>(j.at("B"), "B");
    if (j.contains("alternatives")) {
      for (const auto& alt : j.at("alternatives")) {
        f.alternatives.push_back(
            Decomposition<T>{matrix_from_json<T>(alt.at("D"), "D"), matrix_from_json<T>(alt.at("B"), "B")});
      }
    }
    if (j.contains("seed")) f.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      if (g.contains("mode")) f.generator_mode = g.at("mode").get<std::string>();
      if (g.contains("counts")) f.generator_counts = g.at("counts").get<std::vector<std::size_t>>();
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed instance file: ") + e.what());
  }
  if (f.M.cols() == 0) parse_fail("M has no columns");
  auto check_rows = [&](const Matrix<T>& m, const char* name) {
    if (m.rows() != f.M.rows()) throw Error(Errc::shape_mismatch, std::string(name) + " and M differ in row count");
  };
  if (f.D) check_rows(*f.D, "D");
  if (f.B && f.B->cols() != f.M.cols()) throw Error(Errc::shape_mismatch, "B and M differ in column count");
  for (const auto& alt : f.alternatives) check_rows(alt.D, "alternative D");
  return f;
}

template <Scalar T>
DecompositionFile<T> parse_decomposition_file(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) parse_fail("decomposition file must be a JSON object");
  if (!j.contains("D")) parse_fail("missing field D");
  DecompositionFile<T> f;
  try {
    f.D = matrix_from_json<T>(j.at("D"), "D");
    if (j.contains("B")) f.B = matrix_from_json<T>(j.at("B"), "B");
    if (j.contains("M")) f.M = matrix_from_json<T>(j.at("M"), "M");
    if (j.contains("r") && j.at("r").is_number_unsigned()) f.r = j.at("r").get<std::size_t>();
    if (j.contains("k") && j.at("k").is_number_unsigned()) f.k = j.at("k").get<std::size_t>();
    if (j.contains("alternatives")) {
      for (const auto& alt : j.at("alternatives")) {
        f.alternatives.push_back(
            Decomposition<T>{matrix_from_json<T>(alt.at("D"), "D"), matrix_from_json<T>(alt.at("B"), "B")});
      }
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed decomposition file: ") + e.what());
  }
  if (f.D.cols() == 0) parse_fail("D has no columns");
  return f;
}

template <Scalar T>
std::string write_instance_file(const InstanceFile<T>& f) {
  json j;
  j["format_version"] = kFormatVersion;
  j["backend"] = backend_of<T> == Backend::exact ? "exact" : "float";
  j["r"] = f.r;
  j["k"] = f.k;
  j["M"] = matrix_to_json(f.M);
  if (f.D) j["D"] = matrix_to_json(*f.D);
  if (f.B) j["B"] = matrix_to_json(*f.B);
  if (!f.alternatives.empty()) {
    json alts = json::array();
    for (const auto& alt : f.alternatives) alts.push_back(decomposition_value(alt));
    j["alternatives"] = std::move(alts);
  }
  if (f.seed) j["seed"] = *f.seed;
  if (!f.generator_mode.empty() || !f.generator_counts.empty()) {
    j["generator"] = json{{"mode", f.generator_mode}, {"counts", f.generator_counts}};
  }
  return dump(j);
}

template <Scalar T>
std::string certificate_json(const Certificate<T>& cert) {
  json j;
  j["certified"] = true;
  j["method"] = std::string(theorem_name(cert.method));
  j["r"] = cert.r;
  j["k"] = cert.k;
  j["ordering"] = cert.ordering;
  json hs = json::array();
  for (const auto& h : cert.per_hyperplane) {
    hs.push_back(json{{"test", std::string(theorem_name(h.tag))},
                      {"hyperplane", h.hyperplane},
                      {"position", h.position},
                      {"index_set", h.index_set},
                      {"size", h.index_set.size()},
                      {"spark", h.spark_value},
                      {"bound", h.bound_used},
                      {"numerator", h.numerator},
                      {"denominator", h.denominator},
                      {"c_sum", h.c_sum},
                      {"pruned", h.pruned},
                      {"from_subset_search", h.from_subset_search},
                      {"basis", matrix_to_json(h.subspace.basis())}});
  }
  j["hyperplanes"] = std::move(hs);
  json cs = json::array();
  for (const auto& [key, c] : cert.c_table) cs.push_back(json{{"point", key.first}, {"hyperplane", key.second}, {"c", c}});
  j["c_table"] = std::move(cs);
  return dump(j);
}

template <Scalar T>
std::string decomposition_json(const Decomposition<T>& dec) {
  return dump(decomposition_value(dec));
}

template <Scalar T>
std::string recovery_json(const Recovery<T>& rec) {
  json j = decomposition_value(rec.decomposition);
  json hs = json::array();
  for (const auto& h : rec.hyperplanes) hs.push_back(json{{"witness", h.witness}, {"incident", h.incident}});
  j["hyperplanes"] = std::move(hs);
  j["subsets_visited"] = rec.subsets_visited;
  return dump(j);
}

template <Scalar T>
std::string oracle_json(const OracleResult<T>& res) {
  json j;
  if (res.count) {
    j["count"] = *res.count;
  } else {
    j["count"] = "infinite";
  }
  j["free_hyperplane_flag"] = res.free_hyperplane_flag;
  j["candidate_hyperplanes"] = res.candidate_hyperplanes;
  j["free_flats"] = res.free_flats;
  j["nodes"] = res.nodes;
  json ds = json::array();
  for (const auto& d : res.decompositions) ds.push_back(decomposition_value(d));
  j["decompositions"] = std::move(ds);
  return dump(j);
}

template <Scalar T>
std::string witness_json(const EquivalenceWitness<T>& w) {
  json scales = json::array();
  for (const auto& s : w.scales) scales.push_back(scalar_to_json(s));
  return dump(json{{"permutation", w.permutation}, {"scales", std::move(scales)}});
}

#define LRSCA_INSTANTIATE(T)                                                             \
  template std::string scalar_to_string<T>(const T&);                                    \
  template InstanceFile<T> parse_instance_file<T>(std::string_view, bool);               \
  template std::string write_instance_file<T>(const InstanceFile<T>&);                   \
  template DecompositionFile<T> parse_decomposition_file<T>(std::string_view);           \
  template std::string certificate_json<T>(const Certificate<T>&);                       \
  template std::string decomposition_json<T>(const Decomposition<T>&);                   \
  template std::string recovery_json<T>(const Recovery<T>&);                             \
  template std::string oracle_json<T>(const OracleResult<T>&);                           \
  template std::string witness_json<T>(const EquivalenceWitness<T>&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
