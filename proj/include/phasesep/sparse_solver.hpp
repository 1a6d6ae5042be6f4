#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace phasesep {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Supernodal Cholesky for symmetric positive definite systems with a fixed
// sparsity pattern. The symbolic analysis is done once on the first call.
class CholeskySolver {
 public:
  CholeskySolver();
  ~CholeskySolver();
  CholeskySolver(const CholeskySolver&) = delete;
  CholeskySolver& operator=(const CholeskySolver&) = delete;

  // Returns false when the matrix is not numerically positive definite.
  bool factorize(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace phasesep
