#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "spde/errors.hpp"
#include "spde/experiment.hpp"

namespace spde {

double ks_statistic(std::span<const double> sample, double reference_variance) {
    if (sample.empty()) return 0.0;
    if (!(reference_variance > 0.0)) throw DomainError("reference variance must be positive");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const boost::math::normal_distribution<double> ref(0.0, std::sqrt(reference_variance));
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = boost::math::cdf(ref, x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

NormalityDiagnostics normality_diagnostics(std::span<const double> sample, double reference_variance,
                                           int bins) {
    if (!(reference_variance > 0.0)) throw DomainError("reference variance must be positive");
    if (bins < 1) throw DomainError("histogram needs at least one bin");
    NormalityDiagnostics d;
    d.n = static_cast<long>(sample.size());
    d.reference_variance = reference_variance;
    d.sorted.assign(sample.begin(), sample.end());
    std::sort(d.sorted.begin(), d.sorted.end());
    const double n = static_cast<double>(d.n);
    if (d.n > 0) {
        double sum = 0.0;
        for (double v : d.sorted) sum += v;
        d.mean = sum / n;
    }
    if (d.n > 1) {
        double ss = 0.0;
        for (double v : d.sorted) ss += (v - d.mean) * (v - d.mean);
        d.sd = std::sqrt(ss / (n - 1.0));
        d.sd_defined = true;
    }
    d.degenerate = d.n < 2 || d.sorted.front() == d.sorted.back();
    if (d.n > 1 && d.degenerate) d.sd = 0.0;
    if (d.n > 0) {
        d.ks_statistic = ks_statistic(d.sorted, reference_variance);
        d.ks_critical_5pct = 1.358 / std::sqrt(n);
    }

    const double ref_sd = std::sqrt(reference_variance);
    const boost::math::normal_distribution<double> ref(0.0, ref_sd);
    d.ecdf.resize(d.sorted.size());
    d.normal_cdf.resize(d.sorted.size());
    d.qq_theoretical.resize(d.sorted.size());
    d.qq_empirical = d.sorted;
    for (std::size_t i = 0; i < d.sorted.size(); ++i) {
        d.ecdf[i] = static_cast<double>(i + 1) / n;
        d.normal_cdf[i] = boost::math::cdf(ref, d.sorted[i]);
        d.qq_theoretical[i] = boost::math::quantile(ref, (static_cast<double>(i) + 0.5) / n);
    }

    const double lo = -4.0 * ref_sd;
    const double width = 8.0 * ref_sd / bins;
    d.hist_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) d.hist_edges[b] = lo + b * width;
    d.hist_counts.assign(static_cast<std::size_t>(bins), 0);
    d.hist_density.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) d.hist_density[b] = boost::math::pdf(ref, lo + (b + 0.5) * width);
    for (double v : d.sorted) {
        const double pos = (v - lo) / width;
        if (pos >= 0.0 && pos < bins) ++d.hist_counts[static_cast<std::size_t>(pos)];
    }
    return d;
}

}  // namespace spde
