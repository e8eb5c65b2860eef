#ifndef IHC_ERRORS_HPP
#define IHC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ihc {

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadDiagonal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FactorizationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BandwidthOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonSymmetricImaginaryResidue : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlphaOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BetaOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidGammaOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ihc

#endif // IHC_ERRORS_HPP
