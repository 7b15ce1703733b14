#pragma once

// Scattering-center models and finite lattice Hamiltonians.
//
// Units: hbar = J = a = 1. The two center sites carry lattice labels j = 0, 1;
// a lattice of L sites spans j in [-(L-2)/2, (L-2)/2 + 1].

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

namespace nhscat {

using cplx = std::complex<double>;

/// Gain -i*gamma0 on site 0 and +i*gamma1 on site 1, internal hopping -1.
struct ImaginaryOnsite {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
};

/// kappa_R = kappa - gamma, kappa_L = kappa + gamma.
struct UnequalHopping {
  double kappa = -1.0;
  double gamma = 0.0;
};

/// kappa_R = kappa_L = kappa + i*gamma.
struct ComplexHopping {
  double kappa = -1.0;
  double gamma = 0.0;
};

/// kappa_R = kappa + i*gamma, kappa_L = -kappa + i*gamma.
struct AntiHermitianHopping {
  double kappa = -1.0;
  double gamma = 0.0;
};

/// kappa_R = kappa_L = i*gamma.
struct ImaginaryCoupling {
  double gamma = 0.0;
};

using CenterModel = std::variant<ImaginaryOnsite, UnequalHopping, ComplexHopping,
                                 AntiHermitianHopping, ImaginaryCoupling>;

enum class Family {
  ImaginaryOnsite,
  UnequalHopping,
  ComplexHopping,
  AntiHermitianHopping,
  ImaginaryCoupling,
};

Family family_of(const CenterModel& model);
std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
std::string describe(const CenterModel& model);

/// The parameter swept in pole trajectories: gamma1 for the on-site model,
/// gamma for every hopping model.
std::string_view swept_parameter_name(Family family);
double swept_parameter(const CenterModel& model);
CenterModel with_swept_parameter(CenterModel model, double value);

/// kappa_L sits at H(0,1), kappa_R at H(1,0).
struct Hoppings {
  cplx left;
  cplx right;
};

/// Center hoppings of the asymmetric-hopping variants; nullopt for ImaginaryOnsite.
std::optional<Hoppings> center_hoppings(const CenterModel& model);

struct CenterBlock {
  Eigen::Matrix2cd block;
  cplx left_lead_coupling{-1.0, 0.0};   // H(-1,0) = H(0,-1)
  cplx right_lead_coupling{-1.0, 0.0};  // H(1,2) = H(2,1)
};

CenterBlock build_center(const CenterModel& model);

class LatticeSpec {
 public:
  /// Throws std::invalid_argument unless sites is even and >= 4.
  explicit LatticeSpec(int sites);

  int sites() const noexcept { return sites_; }
  int first_site() const noexcept { return -(sites_ - 2) / 2; }
  int last_site() const noexcept { return (sites_ - 2) / 2 + 1; }
  bool contains(int j) const noexcept { return j >= first_site() && j <= last_site(); }
  /// Row/column index of lattice label j. Throws std::out_of_range.
  int index_of(int j) const;
  int site_of(int index) const noexcept { return index + first_site(); }

  bool operator==(const LatticeSpec&) const = default;

 private:
  int sites_;
};

struct HamiltonianMatrix {
  LatticeSpec lattice;
  Eigen::MatrixXcd matrix;
};

HamiltonianMatrix build_finite_hamiltonian(const CenterModel& model, const LatticeSpec& lattice);

/// The three bands of a tridiagonal matrix: lower[i] = H(i+1,i), upper[i] = H(i,i+1).
struct TridiagonalBands {
  Eigen::VectorXcd diag;
  Eigen::VectorXcd lower;
  Eigen::VectorXcd upper;
};

/// Throws std::invalid_argument if H has entries outside the band.
TridiagonalBands tridiagonal_bands(const HamiltonianMatrix& hamiltonian);

inline double dispersion(double k) { return -2.0 * std::cos(k); }
inline cplx dispersion(cplx k) { return -2.0 * std::cos(k); }

}  // namespace nhscat
