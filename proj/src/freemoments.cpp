#include "fpsz/freemoments.hpp"

namespace fpsz {

FreeFamily::FreeFamily(std::vector<MarginalLaw> marginals, Backend backend)
    : marginals_(std::move(marginals)), backend_(backend) {
  if (marginals_.empty()) throw ConfigError("a free family needs at least one variable");
  for (const MarginalLaw& law : marginals_) kinds_.push_back(law.kind());
  if (backend_ == Backend::Rational && !exact_capable())
    throw BackendMismatch("rational backend requires rational-parameter laws");
}

bool FreeFamily::exact_capable() const {
  for (const MarginalLaw& law : marginals_)
    if (!law.exact()) return false;
  return true;
}

bool FreeFamily::all_self_adjoint() const {
  for (VariableKind k : kinds_)
    if (k != VariableKind::SelfAdjoint) return false;
  return true;
}

}  // namespace fpsz
