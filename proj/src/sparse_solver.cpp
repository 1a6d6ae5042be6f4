#include "phasesep/sparse_solver.hpp"

#include <Eigen/CholmodSupport>

#include "phasesep/error.hpp"

namespace phasesep {

struct CholeskySolver::Impl {
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
  bool analyzed = false;
  bool ready = false;
};

CholeskySolver::CholeskySolver() : impl_(std::make_unique<Impl>()) {}
CholeskySolver::~CholeskySolver() = default;

bool CholeskySolver::factorize(const SparseMatrix& a) {
  if (!impl_->analyzed) {
    impl_->llt.analyzePattern(a);
    impl_->analyzed = true;
  }
  impl_->llt.factorize(a);
  impl_->ready = impl_->llt.info() == Eigen::Success;
  return impl_->ready;
}

Eigen::VectorXd CholeskySolver::solve(const Eigen::VectorXd& b) const {
  if (!impl_->ready) throw ConvergenceError("solve called without a valid factorization", 0.0);
  return impl_->llt.solve(b);
}

}  // namespace phasesep
