#include <algorithm>
#include <cmath>
#include <cstdio>

#include "helmfc/error.hpp"
#include "helmfc/eval.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

namespace {

constexpr double kBaseLoading = 0.5;

// Box-Muller on uniform01 so the stream does not depend on the standard library.
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

Dataset generate_synthetic(const SyntheticOptions& options) {
  if (options.per_class < 1 || options.rois < 2 || options.timepoints < 1)
    throw Error(ErrorKind::InvalidArgument,
                "synthetic data needs per_class >= 1, rois >= 2, timepoints >= 1");
  if (!(options.effect >= 0.0 && options.effect <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "effect must lie in [0, 1]");

  const int m = options.rois;
  const int block = std::max(2, m / 5);
  const int shift = static_cast<int>(std::lround(options.effect * block));

  Dataset ds;
  ds.atlas = AtlasSpec::parse("custom:" + std::to_string(m));
  const SubjectLabel adhd_subtypes[] = {SubjectLabel::AdhdCombined, SubjectLabel::AdhdInattentive,
                                        SubjectLabel::AdhdHyperactive};
  const int total = 2 * options.per_class;
  for (int s = 0; s < total; ++s) {
    // Alternate classes so any prefix of the subject list is balanced.
    const bool adhd = s % 2 == 1;
    const int begin = adhd ? std::min(shift, m - block) : 0;
    const double loading = adhd ? kBaseLoading * (1.0 + options.effect) : kBaseLoading;

    Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(s)}));
    Eigen::MatrixXd data(m, options.timepoints);
    for (int t = 0; t < options.timepoints; ++t) {
      const double factor = standard_normal(rng);
      for (int i = 0; i < m; ++i) {
        const bool in_block = i >= begin && i < begin + block;
        data(i, t) = standard_normal(rng) + (in_block ? loading * factor : 0.0);
      }
    }
    char id[32];
    std::snprintf(id, sizeof(id), "sub%04d", s + 1);
    SubjectRecord rec{id, std::string(id) + ".csv",
                      adhd ? adhd_subtypes[(s / 2) % 3] : SubjectLabel::NC};
    ds.subjects.push_back({rec, TimeSeriesMatrix{id, std::move(data)}});
  }
  return ds;
}

}  // namespace helmfc
