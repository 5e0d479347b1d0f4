#pragma once

namespace autoprove {

enum class Cmp { Eq, Ne, Lt, Gt, Le, Ge };

inline bool cmp_eval(Cmp c, long long a, long long b) {
  switch (c) {
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
    case Cmp::Lt: return a < b;
    case Cmp::Gt: return a > b;
    case Cmp::Le: return a <= b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

inline const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Gt: return ">";
    case Cmp::Le: return "<=";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

/// Comparison with operands swapped: a c b == b swapped(c) a.
inline Cmp cmp_swapped(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
  }
}

}  // namespace autoprove
