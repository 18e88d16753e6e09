#include "crossdiff/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crossdiff {

Grid1D::Grid1D(int n_, double L_) : n(n_), L(L_) {
  if (n < 16) {
    std::ostringstream os;
    os << "grid: cell count must be at least 16, got " << n;
    throw std::invalid_argument(os.str());
  }
  if (!(std::isfinite(L) && L > 0.0)) {
    std::ostringstream os;
    os << "grid: domain length must be positive and finite, got " << L;
    throw std::invalid_argument(os.str());
  }
  dx = L / n;
}

}  // namespace crossdiff
