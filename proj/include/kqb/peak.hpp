#pragma once

namespace kqb {

struct Peak {
  double xi_max = 0.0;
  double t_star = 0.0;
};

}  // namespace kqb
