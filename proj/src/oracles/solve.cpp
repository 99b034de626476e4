#include <cmath>
#include <string>

#include <Eigen/LU>

#include "toetd/error.hpp"
#include "toetd/oracles.hpp"

namespace toetd::oracle {

namespace {
constexpr double kResidualTolerance = 1e-10;
constexpr std::size_t kMaxStates = 1000;
}  // namespace

MrpSolution solve_true_values(const MrpSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.num_states());
  if (spec.num_states() > kMaxStates) throw InvalidInput("true-value solve is limited to 1000 states");
  if (spec.target.rows() != n || spec.target.cols() != n || spec.cumulant.rows() != n || spec.cumulant.cols() != n) {
    throw InvalidInput("target and cumulant matrices must be num_states x num_states");
  }

  Eigen::MatrixXd discounted = spec.target;
  for (Eigen::Index c = 0; c < n; ++c) discounted.col(c) *= spec.discount[c];
  const Eigen::VectorXd expected = spec.target.cwiseProduct(spec.cumulant).rowwise().sum();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - discounted;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw SingularSystem("I - P_pi Gamma is singular; the discounting condition is violated");
  const Eigen::VectorXd values = lu.solve(expected);

  MrpSolution out;
  out.residual = (values - expected - discounted * values).lpNorm<Eigen::Infinity>();
  if (!(out.residual <= kResidualTolerance)) {
    throw SingularSystem("true-value solve residual " + std::to_string(out.residual) + " exceeds 1e-10");
  }
  out.true_values.assign(values.data(), values.data() + n);
  out.expected_cumulant.assign(expected.data(), expected.data() + n);
  return out;
}

}  // namespace toetd::oracle
