#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "compsemi/measure.hpp"
#include "compsemi/rational.hpp"
#include "compsemi/specialfn.hpp"

namespace compsemi {

/// sigma_ap(T_{s^z}) = s^{-1/2} T  union {0}.
struct SingleSpectrum {
  double radius = 1.0;
  bool includes_zero = true;

  /// |lambda| within tol of the radius, or lambda == 0.
  bool contains(Complex lambda, double tol) const;
};

SingleSpectrum single_spectrum(double s);

/// lambda_{s,m}^2 / (m + 3) with lambda_{s,m} = s^{m/2} (1 - sqrt s).
double exclusion_bound(double s, int m);

/// Quadrature check of ||(T_{s^z} - s^{z0}) f||^2 >= exclusion_bound(s, m) ||f||^2
/// at z0 = m/2 + i y0. closed_form holds the exact left side, numeric the
/// quadrature one; params carry the right side.
VerificationReport verify_exclusion_bound(const ExponentialCoefficients& f, double s, int m, double y0,
                                          const QuadratureSpec& spec);

/// Parameters s_j = exp(-q_j beta_{g(j)}) with exact rational q_j.
///
/// Normally every entry shares one scale beta. Entries may instead be split
/// into groups whose scales are declared rationally independent of each
/// other; no integer relation then links entries of different groups. This
/// is the only way to describe independent logarithms with exact data.
class ExponentTuple {
public:
  ExponentTuple(double beta, std::vector<Rational> q);
  ExponentTuple(std::vector<double> group_beta, std::vector<Rational> q, std::vector<int> group);

  std::size_t size() const noexcept { return q_.size(); }
  const std::vector<Rational>& q() const noexcept { return q_; }
  int group(std::size_t j) const { return group_.at(j); }
  double beta_of(std::size_t j) const { return group_beta_[static_cast<std::size_t>(group_.at(j))]; }
  std::size_t group_count() const noexcept { return group_beta_.size(); }

  /// ln s_j = -q_j beta.
  double log_s(std::size_t j) const;
  double s(std::size_t j) const;

  /// The entries listed in `indices`, keeping their groups.
  ExponentTuple subtuple(const std::vector<std::size_t>& indices) const;

private:
  std::vector<double> group_beta_;
  std::vector<Rational> q_;
  std::vector<int> group_;
};

/// Integer vectors k with sum k_j q_j = 0 (within each scale group), in row
/// Hermite normal form.
struct RelationLattice {
  std::vector<std::vector<BigInt>> basis;
};

RelationLattice relation_lattice(const ExponentTuple& t);

/// Row Hermite normal form of an integer matrix; zero rows dropped.
std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> rows);

enum class ShapeKind { full_torus, periodic_curve, generic_closure };
const char* to_string(ShapeKind k) noexcept;

struct JointSpectrumShape {
  ShapeKind kind = ShapeKind::periodic_curve;
  std::optional<double> period;
  int lattice_rank = 0;
  int closure_dimension = 1;  ///< dimension of the torus closure of the curve
  std::vector<std::vector<BigInt>> lattice_basis;
  BigInt period_multiplier = 1;  ///< M in 2 M pi / (q_1 beta)
};

JointSpectrumShape classify_joint_spectrum(const ExponentTuple& t);

/// Phase residue of one relation, wrapped to [-pi, pi].
double relation_residue(const std::vector<BigInt>& k, const std::vector<double>& theta);

/// Whether (s_j^{-1/2} e^{i theta_j})_j lies in the closure of the curve:
/// every basis relation holds mod 2 pi within tol.
bool joint_membership(const ExponentTuple& t, const std::vector<double>& theta, double tol);

/// Membership of an explicit point: the zero tuple, or a point on the
/// product of circles whose angles pass joint_membership.
bool joint_point_membership(const ExponentTuple& t, const std::vector<Complex>& point, double tol);

struct CurveSample {
  double y = 0.0;
  std::vector<Complex> point;  ///< s_j^{-1/2 + i y}
};

std::vector<CurveSample> sample_curve(const ExponentTuple& t, double y_min, double y_max, int count);

/// CSV columns: y, re_1, im_1, ..., re_n, im_n.
void write_curve_csv(const std::vector<CurveSample>& samples, std::ostream& out);

/// {kind, period, lattice_basis, lattice_rank, closure_dimension}.
nlohmann::json to_json(const JointSpectrumShape& shape);

}  // namespace compsemi
