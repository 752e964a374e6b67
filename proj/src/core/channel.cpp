#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mismatch {

namespace {

void check_matrix(int input_size, int output_size, const std::vector<double>& m,
                  const char* what) {
  require(input_size > 0 && output_size > 0, MM_ERR_DIMENSION_MISMATCH,
          std::string(what) + ": alphabet sizes must be positive");
  require(m.size() == static_cast<std::size_t>(input_size) * output_size,
          MM_ERR_DIMENSION_MISMATCH,
          std::string(what) + ": entry count does not match the alphabet sizes");
  for (double v : m) {
    require(std::isfinite(v), MM_ERR_INVALID_ARGUMENT,
            std::string(what) + ": entries must be finite");
    require(v >= 0.0, MM_ERR_NEGATIVE_ENTRY,
            std::string(what) + ": entries must be nonnegative");
  }
}

}  // namespace

std::int64_t tuple_index(const std::vector<int>& digits, int size) {
  std::int64_t idx = 0;
  for (int d : digits) idx = idx * size + d;
  return idx;
}

int tuple_at(std::int64_t index, int size, int k, int pos) {
  for (int i = k - 1; i > pos; --i) index /= size;
  return static_cast<int>(index % size);
}

ChannelSpec ChannelSpec::validated(int input_size, int output_size,
                                   std::vector<double> w) {
  check_matrix(input_size, output_size, w, "channel");
  for (int x = 0; x < input_size; ++x) {
    double sum = 0.0;
    for (int y = 0; y < output_size; ++y)
      sum += w[static_cast<std::size_t>(x) * output_size + y];
    require(std::abs(sum - 1.0) <= kProbTol, MM_ERR_ROW_NOT_STOCHASTIC,
            "channel: row " + std::to_string(x) + " sums to " +
                std::to_string(sum));
  }
  return ChannelSpec{input_size, output_size, std::move(w)};
}

ChannelSpec ChannelSpec::bsc(double crossover) {
  require(std::isfinite(crossover) && crossover >= 0.0 && crossover <= 1.0,
          MM_ERR_INVALID_ARGUMENT, "bsc: crossover must lie in [0, 1]");
  return ChannelSpec{2, 2,
                     {1.0 - crossover, crossover, crossover, 1.0 - crossover}};
}

InputDist InputDist::validated(std::vector<double> p) {
  require(!p.empty(), MM_ERR_EMPTY_DISTRIBUTION,
          "input distribution: no entries");
  double sum = 0.0;
  for (double v : p) {
    require(std::isfinite(v), MM_ERR_INVALID_ARGUMENT,
            "input distribution: entries must be finite");
    require(v >= 0.0, MM_ERR_NEGATIVE_ENTRY,
            "input distribution: entries must be nonnegative");
    sum += v;
  }
  require(std::abs(sum - 1.0) <= kProbTol, MM_ERR_ROW_NOT_STOCHASTIC,
          "input distribution: sums to " + std::to_string(sum));
  return InputDist{std::move(p)};
}

InputDist InputDist::uniform(int size) {
  require(size > 0, MM_ERR_EMPTY_DISTRIBUTION,
          "input distribution: size must be positive");
  return InputDist{std::vector<double>(static_cast<std::size_t>(size),
                                       1.0 / size)};
}

InputDist InputDist::product(const InputDist& a, const InputDist& b) {
  require(a.size() > 0 && b.size() > 0, MM_ERR_EMPTY_DISTRIBUTION,
          "input distribution: no entries");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.size()) * b.size());
  for (double va : a.p)
    for (double vb : b.p) out.push_back(va * vb);
  return InputDist{std::move(out)};
}

InputDist InputDist::power(const InputDist& a, int k) {
  require(k >= 1, MM_ERR_INVALID_ARGUMENT, "input distribution: k must be >= 1");
  InputDist out = a;
  for (int i = 1; i < k; ++i) out = product(out, a);
  return out;
}

ProblemPair validate_pair(const ChannelSpec& channel,
                          const std::vector<double>& q_raw, std::string name) {
  check_matrix(channel.input_size, channel.output_size, q_raw, "metric");

  double max_entry = 0.0;
  for (double v : q_raw) max_entry = std::max(max_entry, v);
  require(max_entry > 0.0, MM_ERR_METRIC_ZERO_ON_SUPPORT,
          "metric: all entries are zero");

  double support_min = std::numeric_limits<double>::infinity();
  for (int x = 0; x < channel.input_size; ++x) {
    for (int y = 0; y < channel.output_size; ++y) {
      if (channel(x, y) <= 0.0) continue;
      const double q = q_raw[static_cast<std::size_t>(x) * channel.output_size + y];
      require(q > 0.0, MM_ERR_METRIC_ZERO_ON_SUPPORT,
              "metric: zero at (" + std::to_string(x) + ", " +
                  std::to_string(y) + ") where the channel is positive");
      support_min = std::min(support_min, q);
    }
  }

  MetricSpec metric;
  metric.input_size = channel.input_size;
  metric.output_size = channel.output_size;
  metric.scale = max_entry;
  metric.q = q_raw;
  for (double& v : metric.q) v /= max_entry;
  metric.q_star = support_min / std::max(1.0, max_entry);

  return ProblemPair{channel, std::move(metric), 1, std::move(name)};
}

ProblemPair product_extend(const ProblemPair& base, int k,
                           const Budget& budget) {
  require(k >= 1, MM_ERR_INVALID_ARGUMENT, "product extension: k must be >= 1");
  if (k == 1) return base;

  const int in = base.channel.input_size;
  const int out = base.channel.output_size;
  double cells = 1.0;
  for (int i = 0; i < k; ++i) cells *= static_cast<double>(in) * out;
  require(cells <= static_cast<double>(budget.atoms), MM_ERR_BUDGET_EXCEEDED,
          "product extension: " + std::to_string(cells) +
              " matrix entries exceed the budget of " +
              std::to_string(budget.atoms));

  std::int64_t in_k = 1, out_k = 1;
  for (int i = 0; i < k; ++i) {
    in_k *= in;
    out_k *= out;
  }

  ProblemPair ext;
  ext.k = base.k * k;
  ext.name = base.name;
  ext.channel.input_size = static_cast<int>(in_k);
  ext.channel.output_size = static_cast<int>(out_k);
  ext.channel.w.resize(static_cast<std::size_t>(in_k) * out_k);
  ext.metric.input_size = static_cast<int>(in_k);
  ext.metric.output_size = static_cast<int>(out_k);
  ext.metric.q.resize(static_cast<std::size_t>(in_k) * out_k);

  for (std::int64_t xs = 0; xs < in_k; ++xs) {
    for (std::int64_t ys = 0; ys < out_k; ++ys) {
      double wv = 1.0, qv = 1.0;
      for (int i = 0; i < k; ++i) {
        const int x = tuple_at(xs, in, k, i);
        const int y = tuple_at(ys, out, k, i);
        wv *= base.channel(x, y);
        qv *= base.metric(x, y);
      }
      ext.channel.w[static_cast<std::size_t>(xs) * out_k + ys] = wv;
      ext.metric.q[static_cast<std::size_t>(xs) * out_k + ys] = qv;
    }
  }

  const double scale = base.metric.scale;
  const double floor_raw = base.metric.q_star * std::max(1.0, scale);
  ext.metric.scale = std::pow(scale, k);
  ext.metric.q_star =
      std::pow(floor_raw, k) / std::max(1.0, std::pow(scale, k));
  return ext;
}

MetricSpec tilt_metric(const MetricSpec& m, double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, MM_ERR_NONPOSITIVE_TILT,
          "tilt: alpha must be positive");
  MetricSpec out = m;
  for (double& v : out.q) v = std::pow(v, alpha);
  const double floor_raw = m.q_star * std::max(1.0, m.scale);
  out.scale = std::pow(m.scale, alpha);
  out.q_star =
      std::pow(floor_raw, alpha) / std::max(1.0, std::pow(m.scale, alpha));
  return out;
}

ProblemPair tilt_pair(const ProblemPair& base, double alpha) {
  ProblemPair out = base;
  out.metric = tilt_metric(base.metric, alpha);
  return out;
}

MetricSpec erasures_only_metric(const ChannelSpec& channel) {
  MetricSpec m;
  m.input_size = channel.input_size;
  m.output_size = channel.output_size;
  m.q.resize(channel.w.size());
  for (std::size_t i = 0; i < channel.w.size(); ++i)
    m.q[i] = channel.w[i] > 0.0 ? 1.0 : 0.0;
  m.scale = 1.0;
  m.q_star = 1.0;
  return m;
}

ProblemPair erasures_only_pair(const ChannelSpec& channel, std::string name) {
  return ProblemPair{channel, erasures_only_metric(channel), 1,
                     std::move(name)};
}

}  // namespace mismatch
