#include "loopsig/rational.hpp"

#include <stdexcept>

namespace loopsig {

std::string rational_to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: " + s);
    r.canonicalize();
    return r;
}

}  // namespace loopsig
