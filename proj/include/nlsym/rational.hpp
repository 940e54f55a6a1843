#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "nlsym/errors.hpp"

namespace nlsym {

using Rat = mpq_class;

inline std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline double rat_to_double(const Rat& q) {
    return q.get_d();
}

// Best rational approximation to x with denominator <= max_den, by the
// continued fraction of x truncated at the denominator bound.
Rat rat_round(double x, std::int64_t max_den);

}  // namespace nlsym
