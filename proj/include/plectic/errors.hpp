#pragma once

#include <stdexcept>
#include <string>

namespace plectic {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct PrimeMismatch : Error {
    explicit PrimeMismatch(const std::string& what = "operands live over different primes") : Error(what) {}
};

struct CancellationError : Error {
    explicit CancellationError(const std::string& what = "cancellation below the precision floor") : Error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

struct RamifiedUnsupported : Error {
    explicit RamifiedUnsupported(const std::string& what = "operation requires an unramified extension") : Error(what) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what = "no significant digits left") : Error(what) {}
};

struct NotHyperbolic : Error {
    explicit NotHyperbolic(const std::string& what = "element is not hyperbolic") : Error(what) {}
};

struct PoleError : Error {
    explicit PoleError(const std::string& what = "evaluation point hits the divisor") : Error(what) {}
};

struct RationalPoint : Error {
    explicit RationalPoint(const std::string& what = "point lies in P1(Qp); reduction undefined") : Error(what) {}
};

struct RamifiedMidpoint : Error {
    explicit RamifiedMidpoint(const std::string& what = "point reduces to an edge midpoint") : Error(what) {}
};

struct CertificateError : Error {
    explicit CertificateError(const std::string& what) : Error(what) {}
};

struct NotTransitive : Error {
    explicit NotTransitive(const std::string& what = "coset action is not transitive") : Error(what) {}
};

struct UnsupportedGroupShape : Error {
    explicit UnsupportedGroupShape(const std::string& what = "operation needs a product group") : Error(what) {}
};

struct DepthInsufficient : Error {
    explicit DepthInsufficient(const std::string& what = "fundamental domain not closed at this depth") : Error(what) {}
};

struct RankMismatch : Error {
    explicit RankMismatch(const std::string& what = "measure lattice rank disagrees with the product formula") : Error(what) {}
};

struct BallTooDeep : Error {
    explicit BallTooDeep(const std::string& what = "ball lies beyond the available tree depth") : Error(what) {}
};

struct NonStabilized : Error {
    explicit NonStabilized(const std::string& what = "integral digits did not stabilize at the requested precision") : Error(what) {}
};

struct NonElementary : Error {
    explicit NonElementary(const std::string& what = "value has no elementary-tensor representative") : Error(what) {}
};

struct NonPrimitiveCharacter : Error {
    explicit NonPrimitiveCharacter(const std::string& what = "character is not primitive") : Error(what) {}
};

struct PrecisionInsufficient : Error {
    explicit PrecisionInsufficient(const std::string& what = "cannot certify equality at working precision") : Error(what) {}
};

struct NotASubgroup : Error {
    explicit NotASubgroup(const std::string& what = "word is not in the subgroup") : Error(what) {}
};

struct BoundExhausted : Error {
    explicit BoundExhausted(const std::string& what = "word bound exhausted") : Error(what) {}
};

struct PointCollision : Error {
    explicit PointCollision(const std::string& what = "image point hits the limit cover") : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace plectic
