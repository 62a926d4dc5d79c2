#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrsca/certify.hpp"
#include "lrsca/model.hpp"
#include "lrsca/oracle.hpp"
#include "lrsca/recover.hpp"

namespace lrsca {

inline constexpr std::string_view kFormatVersion = "lrsca-1";

/// On-disk instance. Matrices are row-major arrays; exact files write every
/// entry as a string "p/q" (or "p"), floating files as JSON numbers.
template <Scalar T>
struct InstanceFile {
  std::size_t r = 0;
  std::size_t k = 0;
  Matrix<T> M;
  std::optional<Matrix<T>> D;
  std::optional<Matrix<T>> B;
  /// Further decompositions of the same M (a counterexample's second one).
  std::vector<Decomposition<T>> alternatives;
  std::optional<std::uint64_t> seed;
  std::string generator_mode;
  std::vector<std::size_t> generator_counts;

  Instance<T> instance() const { return Instance<T>(M, r, k); }
};

/// Backend declared by the "backend" field; exact when absent. Throws
/// Errc::parse_error on malformed JSON.
Backend detect_backend(std::string_view json_text);

/// Entries may be JSON integers, floats, or strings holding "p/q", an integer
/// or a decimal. Exact parsing never goes through floating point except for
/// JSON float literals, which are taken at their binary value.
/// With strict_rk = false, missing or inconsistent r/k are tolerated (set to
/// 0) so that commands needing only M can read partial files.
/// Throws Errc::parse_error or Errc::shape_mismatch.
template <Scalar T>
InstanceFile<T> parse_instance_file(std::string_view json_text, bool strict_rk = true);

/// Any JSON object carrying a dictionary: an instance file, a recovery
/// result or a bare {"D", "B"} pair.
template <Scalar T>
struct DecompositionFile {
  Matrix<T> D;
  std::optional<Matrix<T>> B;
  std::optional<Matrix<T>> M;
  std::size_t r = 0;
  std::size_t k = 0;
  std::vector<Decomposition<T>> alternatives;
};

/// Throws Errc::parse_error when D is missing or malformed.
template <Scalar T>
DecompositionFile<T> parse_decomposition_file(std::string_view json_text);

template <Scalar T>
std::string write_instance_file(const InstanceFile<T>& file);

template <Scalar T>
std::string scalar_to_string(const T& v);

/// Exact: "p/q" or "p". Throws Errc::parse_error.
Rational parse_rational(std::string_view text);

template <Scalar T>
std::string certificate_json(const Certificate<T>& cert);

template <Scalar T>
std::string decomposition_json(const Decomposition<T>& dec);

template <Scalar T>
std::string recovery_json(const Recovery<T>& rec);

template <Scalar T>
std::string oracle_json(const OracleResult<T>& res);

template <Scalar T>
std::string witness_json(const EquivalenceWitness<T>& w);

}  // namespace lrsca
