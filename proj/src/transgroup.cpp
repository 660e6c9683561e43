#include "bgpc/transgroup.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bgpc {

namespace {

constexpr double kDominance = 1e6;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Largest and second-largest moduli of a sequence, plus how many exceed `cut`.
struct LineStats {
  double largest = 0.0;
  double second = 0.0;
  int above = 0;
};

template <class Line>
LineStats line_stats(const Line& line, double cut) {
  LineStats st;
  for (Eigen::Index i = 0; i < line.size(); ++i) {
    const double a = std::abs(line(i));
    if (a > cut) ++st.above;
    if (a > st.largest) {
      st.second = st.largest;
      st.largest = a;
    } else if (a > st.second) {
      st.second = a;
    }
  }
  return st;
}

bool single_dominant(const LineStats& st) { return st.above == 1 && st.largest >= kDominance * st.second; }

double scale_of(double a, double b) { return std::max(a, b); }

bool close(const CMatrix& a, const CMatrix& b) {
  const double s = scale_of(max_abs(a), max_abs(b));
  return max_abs(CMatrix(a - b)) <= kWitnessRelTol * s;
}

bool close(const CVector& a, const CVector& b) {
  const double s = scale_of(max_abs(a), max_abs(b));
  return max_abs(CVector(a - b)) <= kWitnessRelTol * s;
}

Complex frobenius_inner(const CMatrix& a, const CMatrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

bool non_vanishing(const CVector& v, double cut) { return v.size() > 0 && v.cwiseAbs().minCoeff() > cut; }

// gamma = sigma * col for some nonzero sigma, up to kClosedFormRelTol.
bool proportional_to(const CVector& gamma, const CVector& col, const Tolerance& tol) {
  const Complex sigma = col.dot(gamma) / col.squaredNorm();  // dot() conjugates the left operand
  const double g = max_abs(gamma);
  if (std::abs(sigma) * max_abs(col) <= tol.abs * std::max(1.0, g)) return false;
  return max_abs(CVector(gamma - sigma * col)) <= kClosedFormRelTol * g;
}

CMatrix shift_rows_2d(const CMatrix& X, int side, int dv, int dh) {
  CMatrix out(X.rows(), X.cols());
  for (int h = 0; h < side; ++h)
    for (int v = 0; v < side; ++v) {
      const int sv = ((v - dv) % side + side) % side;
      const int sh = ((h - dh) % side + side) % side;
      out.row(h * side + v) = X.row(sh * side + sv);
    }
  return out;
}

void check_pair_shapes(const GainSignalPair& a, const GainSignalPair& b) {
  if (a.lambda.size() != b.lambda.size() || a.X.rows() != b.X.rows() || a.X.cols() != b.X.cols())
    throw DimensionError("orbit_equivalent: pair shapes differ");
  if (a.lambda.size() == 0) throw DimensionError("orbit_equivalent: empty gain vector");
}

// Tries X1 = sigma * S for a fixed row-shifted S of X0, then checks the gains.
std::optional<Complex> fit_scale(const CMatrix& S, const CMatrix& X1) {
  const double ss = S.squaredNorm();
  if (ss == 0.0) return std::nullopt;
  return frobenius_inner(S, X1) / ss;
}

}  // namespace

std::string group_name(const GroupKind& kind) {
  return std::visit(overloaded{[](const group::Scaling&) { return std::string("scaling"); },
                               [](const group::DftShiftScale&) { return std::string("dft_shift_scale"); },
                               [](const group::Dft2dShiftScale&) { return std::string("dft2d_shift_scale"); },
                               [](const group::GammaOf&) { return std::string("gamma_of_basis"); }},
                    kind);
}

bool is_generalized_permutation(const CMatrix& P, const Tolerance& tol) {
  validate(tol);
  if (P.rows() != P.cols() || P.rows() == 0) throw DimensionError("is_generalized_permutation: P must be square");
  const double cut = tol.abs * std::max(1.0, max_abs(P));
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (!single_dominant(line_stats(P.row(i), cut))) return false;
  for (Eigen::Index j = 0; j < P.cols(); ++j)
    if (!single_dominant(line_stats(P.col(j), cut))) return false;
  return numerical_rank(P, tol) == P.rows();
}

CMatrix conjugated_diagonal(const CMatrix& basis, const GammaVector& gamma) {
  if (basis.rows() != basis.cols()) throw DimensionError("basis must be square");
  if (gamma.size() != basis.rows()) throw DimensionError("gamma length does not match the basis");
  Eigen::MatrixXcd rhs = gamma.asDiagonal() * basis;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(basis).solve(rhs);
}

bool gamma_member(const CMatrix& basis, const GammaVector& gamma, const Tolerance& tol) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) throw DimensionError("gamma_member: basis must be square");
  if (gamma.size() != basis.rows()) throw DimensionError("gamma_member: gamma length does not match the basis");
  if (numerical_rank(basis, tol) < basis.rows()) throw RankError("gamma_member: basis is singular");
  return is_generalized_permutation(conjugated_diagonal(basis, gamma), tol);
}

CMatrix closed_form_basis(ClosedFormKind kind, int n) {
  switch (kind) {
    case ClosedFormKind::Identity: return identity(n);
    case ClosedFormKind::Dft: return dft(n);
    case ClosedFormKind::Dft2: return dft2(n);
    case ClosedFormKind::FdInv: return CMatrix(dft(n) * finite_diff_inv(n));
    case ClosedFormKind::Haar4: return haar4();
  }
  throw ParameterError("unknown closed-form kind");
}

bool gamma_closed_form_member(ClosedFormKind kind, const GammaVector& gamma, const Tolerance& tol) {
  validate(tol);
  const auto n = static_cast<int>(gamma.size());
  if (n == 0) throw DimensionError("gamma_closed_form_member: empty gamma");
  const double g = max_abs(gamma);
  switch (kind) {
    case ClosedFormKind::Identity:
      return non_vanishing(gamma, tol.abs * std::max(1.0, g));
    case ClosedFormKind::Dft:
    case ClosedFormKind::Dft2: {
      const CMatrix F = kind == ClosedFormKind::Dft ? dft(n) : dft2(n);
      const double root_n = std::sqrt(static_cast<double>(n));
      for (int k = 0; k < n; ++k)
        if (proportional_to(gamma, CVector(root_n * F.col(k)), tol)) return true;
      return false;
    }
    case ClosedFormKind::FdInv:
      return proportional_to(gamma, CVector::Ones(n), tol);
    case ClosedFormKind::Haar4: {
      if (n != 4) throw DimensionError("Haar4 closed form needs length-4 gamma");
      for (int s3 : {1, -1})
        for (int s4 : {1, -1}) {
          CVector pattern(4);
          pattern << 1.0, 1.0, double(s3), double(s4);
          if (proportional_to(gamma, pattern, tol)) return true;
        }
      return false;
    }
  }
  throw ParameterError("unknown closed-form kind");
}

GammaVector transform_gamma(const GroupKind& kind, const TransformParams& params, int n) {
  if (params.sigma == Complex(0.0, 0.0)) throw ParameterError("transform: sigma must be nonzero");
  const double root_n = std::sqrt(static_cast<double>(n));
  return std::visit(
      overloaded{
          [&](const group::Scaling&) -> GammaVector { return CVector::Constant(n, 1.0 / params.sigma); },
          [&](const group::DftShiftScale&) -> GammaVector {
            const int k = ((params.shift % n) + n) % n;
            return params.sigma * root_n * CVector(dft(n).col(k));
          },
          [&](const group::Dft2dShiftScale&) -> GammaVector {
            const auto side = exact_sqrt(n);
            if (!side) throw DimensionError("2D shift group needs n to be a perfect square");
            const int dv = ((params.shift2d.first % *side) + *side) % *side;
            const int dh = ((params.shift2d.second % *side) + *side) % *side;
            return params.sigma * root_n * CVector(dft2(n).col(dh * *side + dv));
          },
          [&](const group::GammaOf&) -> GammaVector {
            if (!params.gamma) throw ParameterError("transform: GammaOf needs an explicit gamma");
            if (params.gamma->size() != n) throw DimensionError("transform: gamma length mismatch");
            return *params.gamma;
          }},
      kind);
}

GainSignalPair apply_transform(const GroupKind& kind, const TransformParams& params, const GainSignalPair& pair,
                               const Tolerance& tol) {
  const auto n = static_cast<int>(pair.lambda.size());
  if (n == 0 || pair.X.rows() == 0) throw DimensionError("apply_transform: empty pair");
  const GammaVector gamma = transform_gamma(kind, params, n);
  if (!non_vanishing(gamma, tol.abs)) throw ParameterError("apply_transform: gamma vanishes");

  GainSignalPair out;
  out.lambda = pair.lambda.cwiseQuotient(gamma);
  std::visit(overloaded{[&](const group::Scaling&) { out.X = pair.X / params.sigma; },
                        [&](const group::DftShiftScale&) {
                          const CMatrix F = dft(n);
                          out.X = conjugated_diagonal(F, gamma) * pair.X;
                        },
                        [&](const group::Dft2dShiftScale&) {
                          const CMatrix F2 = dft2(n);
                          out.X = conjugated_diagonal(F2, gamma) * pair.X;
                        },
                        [&](const group::GammaOf& g) {
                          if (!gamma_member(g.basis, gamma, tol))
                            throw ParameterError("apply_transform: gamma is not in Gamma(A)");
                          out.X = conjugated_diagonal(g.basis, gamma) * pair.X;
                        }},
             kind);
  return out;
}

OrbitVerdict orbit_equivalent(const GroupKind& kind, const GainSignalPair& p0, const GainSignalPair& p1,
                              const Tolerance& tol) {
  check_pair_shapes(p0, p1);
  if (!non_vanishing(p0.lambda, tol.abs)) throw DegenerateInputError("orbit_equivalent: lambda0 vanishes");
  const auto n = static_cast<int>(p0.lambda.size());

  // Candidate element given (sigma, shift): accept if both halves of the pair match.
  auto try_element = [&](const TransformParams& params, const CMatrix& expected_X) -> std::optional<OrbitVerdict> {
    const GammaVector gamma = transform_gamma(kind, params, n);
    if (!close(expected_X, p1.X)) return std::nullopt;
    if (!close(CVector(p1.lambda.cwiseProduct(gamma)), p0.lambda)) return std::nullopt;
    TransformParams w = params;
    w.gamma = gamma;
    return OrbitVerdict{true, w, "witness reproduces the pair"};
  };

  return std::visit(
      overloaded{
          [&](const group::Scaling&) -> OrbitVerdict {
            const Complex sigma = p0.lambda.dot(p1.lambda) / p0.lambda.squaredNorm();
            if (std::abs(sigma) <= tol.abs) return {false, std::nullopt, "lambda1 is not a nonzero multiple"};
            TransformParams params;
            params.sigma = sigma;
            if (auto v = try_element(params, CMatrix(p0.X / sigma))) return *v;
            return {false, std::nullopt, "no single scale maps the pair"};
          },
          [&](const group::DftShiftScale&) -> OrbitVerdict {
            if (p0.X.rows() != n) throw DimensionError("orbit_equivalent: X must have n rows");
            const CMatrix F = dft(n);
            const double root_n = std::sqrt(static_cast<double>(n));
            for (int k = 0; k < n; ++k) {
              const CMatrix S = circshift_rows(p0.X, k);
              auto sigma = fit_scale(S, p1.X);
              if (!sigma) {
                // X0 = 0: only the gains can fix sigma.
                if (!non_vanishing(p1.lambda, tol.abs))
                  throw DegenerateInputError("orbit_equivalent: lambda1 vanishes");
                const CVector ratio = p0.lambda.cwiseQuotient(p1.lambda);
                const CVector col = root_n * F.col(k);
                sigma = col.dot(ratio) / col.squaredNorm();
              }
              if (std::abs(*sigma) <= tol.abs) continue;
              TransformParams params;
              params.sigma = *sigma;
              params.shift = k;
              if (auto v = try_element(params, CMatrix(*sigma * S))) return *v;
            }
            return {false, std::nullopt, "no scaled circular shift maps the pair"};
          },
          [&](const group::Dft2dShiftScale&) -> OrbitVerdict {
            const auto side = exact_sqrt(n);
            if (!side) throw DimensionError("2D shift group needs n to be a perfect square");
            if (p0.X.rows() != n) throw DimensionError("orbit_equivalent: X must have n rows");
            const CMatrix F2 = dft2(n);
            const double root_n = std::sqrt(static_cast<double>(n));
            for (int dh = 0; dh < *side; ++dh)
              for (int dv = 0; dv < *side; ++dv) {
                const CMatrix S = shift_rows_2d(p0.X, *side, dv, dh);
                auto sigma = fit_scale(S, p1.X);
                if (!sigma) {
                  if (!non_vanishing(p1.lambda, tol.abs))
                    throw DegenerateInputError("orbit_equivalent: lambda1 vanishes");
                  const CVector ratio = p0.lambda.cwiseQuotient(p1.lambda);
                  const CVector col = root_n * F2.col(dh * *side + dv);
                  sigma = col.dot(ratio) / col.squaredNorm();
                }
                if (std::abs(*sigma) <= tol.abs) continue;
                TransformParams params;
                params.sigma = *sigma;
                params.shift2d = {dv, dh};
                if (auto v = try_element(params, CMatrix(*sigma * S))) return *v;
              }
            return {false, std::nullopt, "no scaled 2D circular shift maps the pair"};
          },
          [&](const group::GammaOf& g) -> OrbitVerdict {
            if (!non_vanishing(p1.lambda, tol.abs)) throw DegenerateInputError("orbit_equivalent: lambda1 vanishes");
            const GammaVector gamma = p0.lambda.cwiseQuotient(p1.lambda);
            if (!gamma_member(g.basis, gamma, tol))
              return {false, std::nullopt, "lambda0 ./ lambda1 is not in Gamma(A)"};
            const CMatrix P = conjugated_diagonal(g.basis, gamma);
            if (!close(CMatrix(P * p0.X), p1.X))
              return {false, std::nullopt, "X1 differs from A^-1 diag(gamma) A X0"};
            TransformParams w;
            w.gamma = gamma;
            return {true, w, "lambda0 ./ lambda1 is in Gamma(A) and maps X0 to X1"};
          }},
      kind);
}

}  // namespace bgpc
