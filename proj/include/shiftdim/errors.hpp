#pragma once

#include <stdexcept>

namespace shiftdim {

/// A computation would exceed its configured enumeration or work budget.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace shiftdim
