#ifndef KWLE_ERRORS_HPP
#define KWLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kwle {

/// Base class for all library failures that are not plain argument errors.
/// Argument/domain violations throw std::domain_error or std::invalid_argument.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data could not be parsed (CSV etc.). Message names the offending line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// An observation lies outside the support of the requested model.
class SupportError : public Error {
public:
    using Error::Error;
};

/// A sample is too degenerate for the requested estimator (constant data,
/// zero log-sum, score function without a root).
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// The sample L-moment variance proxy mu2 - mu1^2 came out non-positive, so
/// the scale estimator is undefined for this weight shape. The remedy is to
/// choose a different (a, b).
class NegativeVarianceProxyError : public Error {
public:
    NegativeVarianceProxyError(const std::string& msg, double proxy)
        : Error(msg), variance_proxy_(proxy) {}
    double variance_proxy() const { return variance_proxy_; }

private:
    double variance_proxy_;
};

/// Numerical integration failed to meet the requested tolerance, or the
/// integral provably does not converge for the given shape.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed after automatic expansion.
class BracketError : public Error {
public:
    using Error::Error;
};

}  // namespace kwle

#endif  // KWLE_ERRORS_HPP
