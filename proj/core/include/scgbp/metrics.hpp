#pragma once

#include <span>
#include <vector>

namespace scgbp {

struct ErrorStats {
    double me = 0.0;   ///< mean of est - ref
    double mae = 0.0;  ///< mean of |est - ref|
    double std = 0.0;  ///< population standard deviation of est - ref
};

struct BlandAltman {
    double bias = 0.0;
    double sd = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
    std::vector<double> means; ///< (est + ref) / 2 per pair
    std::vector<double> diffs; ///< est - ref per pair
};

/// Accuracy bound on mean error and its spread (inclusive), 5 +/- 8 mmHg by default.
struct IeeeBound {
    double max_abs_me = 5.0;
    double max_std = 8.0;
};

struct EvalReport {
    std::size_t n = 0;
    double me_mmHg = 0.0;
    double mae_mmHg = 0.0;
    double std_mmHg = 0.0;
    double pearson_r = 0.0;
    bool pearson_defined = false;
    double ba_bias_mmHg = 0.0;
    double ba_loa_low_mmHg = 0.0;
    double ba_loa_high_mmHg = 0.0;
    bool ieee_pass = false;
};

ErrorStats error_stats(std::span<const double> est, std::span<const double> ref);

/// Sample Pearson correlation. Throws when either sequence is constant.
double pearson(std::span<const double> est, std::span<const double> ref);

/// bias +/- 1.96 * population SD of the differences.
BlandAltman bland_altman(std::span<const double> est, std::span<const double> ref);

bool ieee_check(double me, double std, const IeeeBound& bound = {});

/// All of the above. pearson_r is left at 0 with pearson_defined = false when
/// either sequence is constant.
EvalReport evaluate(std::span<const double> est, std::span<const double> ref, const IeeeBound& bound = {});

} // namespace scgbp
