#pragma once

#include <cmath>
#include <sstream>

#include "fracsig/errors.hpp"

namespace fracsig {

/// Fractional order α > 0.
class Alpha {
public:
    explicit Alpha(double value) : value_(value)
    {
        if (!(value > 0.0) || !std::isfinite(value)) {
            std::ostringstream os;
            os << "alpha must be a finite positive number, got " << value;
            throw DomainError(os.str());
        }
    }

    double value() const { return value_; }
    operator double() const { return value_; }

private:
    double value_;
};

}  // namespace fracsig
