#include "nhscat/model.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace nhscat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::array<std::string_view, 5> kFamilyNames = {
    "imaginary_onsite", "unequal_hopping", "complex_hopping", "anti_hermitian_hopping",
    "imaginary_coupling"};

constexpr cplx kI{0.0, 1.0};

}  // namespace

Family family_of(const CenterModel& model) { return static_cast<Family>(model.index()); }

std::string_view family_name(Family family) { return kFamilyNames[static_cast<size_t>(family)]; }

std::optional<Family> parse_family(std::string_view name) {
  for (size_t i = 0; i < kFamilyNames.size(); ++i) {
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  }
  return std::nullopt;
}

std::string describe(const CenterModel& model) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const ImaginaryOnsite& m) {
                   os << "imaginary_onsite(gamma0=" << m.gamma0 << ", gamma1=" << m.gamma1 << ")";
                 },
                 [&](const UnequalHopping& m) {
                   os << "unequal_hopping(kappa=" << m.kappa << ", gamma=" << m.gamma << ")";
                 },
                 [&](const ComplexHopping& m) {
                   os << "complex_hopping(kappa=" << m.kappa << ", gamma=" << m.gamma << ")";
                 },
                 [&](const AntiHermitianHopping& m) {
                   os << "anti_hermitian_hopping(kappa=" << m.kappa << ", gamma=" << m.gamma
                      << ")";
                 },
                 [&](const ImaginaryCoupling& m) {
                   os << "imaginary_coupling(gamma=" << m.gamma << ")";
                 },
             },
             model);
  return os.str();
}

std::string_view swept_parameter_name(Family family) {
  return family == Family::ImaginaryOnsite ? "gamma1" : "gamma";
}

double swept_parameter(const CenterModel& model) {
  return std::visit(overloaded{
                        [](const ImaginaryOnsite& m) { return m.gamma1; },
                        [](const auto& m) { return m.gamma; },
                    },
                    model);
}

CenterModel with_swept_parameter(CenterModel model, double value) {
  std::visit(overloaded{
                 [&](ImaginaryOnsite& m) { m.gamma1 = value; },
                 [&](auto& m) { m.gamma = value; },
             },
             model);
  return model;
}

std::optional<Hoppings> center_hoppings(const CenterModel& model) {
  return std::visit(
      overloaded{
          [](const ImaginaryOnsite&) -> std::optional<Hoppings> { return std::nullopt; },
          [](const UnequalHopping& m) -> std::optional<Hoppings> {
            return Hoppings{cplx{m.kappa + m.gamma, 0.0}, cplx{m.kappa - m.gamma, 0.0}};
          },
          [](const ComplexHopping& m) -> std::optional<Hoppings> {
            const cplx h{m.kappa, m.gamma};
            return Hoppings{h, h};
          },
          [](const AntiHermitianHopping& m) -> std::optional<Hoppings> {
            return Hoppings{cplx{-m.kappa, m.gamma}, cplx{m.kappa, m.gamma}};
          },
          [](const ImaginaryCoupling& m) -> std::optional<Hoppings> {
            return Hoppings{m.gamma * kI, m.gamma * kI};
          },
      },
      model);
}

CenterBlock build_center(const CenterModel& model) {
  CenterBlock out;
  if (const auto* onsite = std::get_if<ImaginaryOnsite>(&model)) {
    out.block << cplx{0.0, -onsite->gamma0}, cplx{-1.0, 0.0},  //
        cplx{-1.0, 0.0}, cplx{0.0, onsite->gamma1};
    return out;
  }
  const Hoppings h = *center_hoppings(model);
  out.block << cplx{}, h.left,  //
      h.right, cplx{};
  return out;
}

LatticeSpec::LatticeSpec(int sites) : sites_(sites) {
  if (sites < 4 || sites % 2 != 0) {
    throw std::invalid_argument("lattice size must be even and >= 4, got " +
                                std::to_string(sites));
  }
}

int LatticeSpec::index_of(int j) const {
  if (!contains(j)) {
    throw std::out_of_range("site " + std::to_string(j) + " outside lattice [" +
                            std::to_string(first_site()) + ", " + std::to_string(last_site()) +
                            "]");
  }
  return j - first_site();
}

HamiltonianMatrix build_finite_hamiltonian(const CenterModel& model, const LatticeSpec& lattice) {
  const int n = lattice.sites();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = -1.0;
    h(i + 1, i) = -1.0;
  }
  const CenterBlock center = build_center(model);
  const int c0 = lattice.index_of(0);
  h.block<2, 2>(c0, c0) = center.block;
  h(c0 - 1, c0) = center.left_lead_coupling;
  h(c0, c0 - 1) = center.left_lead_coupling;
  h(c0 + 1, c0 + 2) = center.right_lead_coupling;
  h(c0 + 2, c0 + 1) = center.right_lead_coupling;
  return HamiltonianMatrix{lattice, std::move(h)};
}

TridiagonalBands tridiagonal_bands(const HamiltonianMatrix& hamiltonian) {
  const auto& h = hamiltonian.matrix;
  const Eigen::Index n = h.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      if ((row > col + 1 || col > row + 1) && h(row, col) != cplx{}) {
        throw std::invalid_argument("Hamiltonian is not tridiagonal");
      }
    }
  }
  TridiagonalBands bands;
  bands.diag = h.diagonal();
  bands.lower = h.diagonal(-1);
  bands.upper = h.diagonal(1);
  return bands;
}

}  // namespace nhscat
