#include "polarkit/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "polarkit/error.hpp"
#include "polarkit/random.hpp"

namespace polarkit {

void Dataset::add(std::span<const double> x, Sentiment label, std::string id) {
  if (labels.empty() && features.empty()) dims = x.size();
  if (x.size() != dims)
    throw Error(Errc::DimensionMismatch, "row has " + std::to_string(x.size()) +
                                             " features, dataset has " + std::to_string(dims));
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
  ids.push_back(std::move(id));
}

void Dataset::validate() const {
  if (features.size() != labels.size() * dims || ids.size() != labels.size())
    throw Error(Errc::DimensionMismatch, "dataset fields disagree on the number of rows");
  for (double x : features)
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteFeature, "dataset contains a non-finite value");
}

bool Dataset::has_both_labels() const {
  bool pos = false, neg = false;
  for (auto l : labels) (l == Sentiment::Positive ? pos : neg) = true;
  return pos && neg;
}

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::LinearSVM: return "linear_svm";
    case ClassifierKind::GaussianSVM: return "gaussian_svm";
    case ClassifierKind::RandomForest: return "random_forest";
    case ClassifierKind::MLP: return "mlp";
    case ClassifierKind::KNN: return "knn";
  }
  return "linear_svm";
}

std::optional<ClassifierKind> parse_classifier(std::string_view text) noexcept {
  for (auto k : kAllClassifiers)
    if (text == to_string(k)) return k;
  return std::nullopt;
}

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind, std::uint64_t seed) {
  switch (kind) {
    case ClassifierKind::LinearSVM: return {LinearSvmParams{}, seed};
    case ClassifierKind::GaussianSVM: return {GaussianSvmParams{}, seed};
    case ClassifierKind::RandomForest: return {RandomForestParams{}, seed};
    case ClassifierKind::MLP: return {MlpParams{}, seed};
    case ClassifierKind::KNN: return {KnnParams{}, seed};
  }
  return {LinearSvmParams{}, seed};
}

namespace {

[[noreturn]] void bad_param(const std::string& what) {
  throw Error(Errc::InvalidHyperparameter, what);
}

}  // namespace

void ClassifierSpec::validate() const {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearSvmParams>) {
          if (!(p.lambda > 0)) bad_param("linear_svm: lambda must be > 0");
          if (p.epochs < 1) bad_param("linear_svm: epochs must be >= 1");
        } else if constexpr (std::is_same_v<P, GaussianSvmParams>) {
          if (!(p.c > 0)) bad_param("gaussian_svm: C must be > 0");
          if (p.gamma && !(*p.gamma > 0)) bad_param("gaussian_svm: gamma must be > 0");
          if (!(p.tolerance > 0)) bad_param("gaussian_svm: tolerance must be > 0");
          if (p.max_iterations < 1) bad_param("gaussian_svm: max_iterations must be >= 1");
        } else if constexpr (std::is_same_v<P, RandomForestParams>) {
          if (p.trees < 1) bad_param("random_forest: trees must be >= 1");
          if (p.max_depth < 1) bad_param("random_forest: max_depth must be >= 1");
          if (p.min_samples_split < 2) bad_param("random_forest: min_samples_split must be >= 2");
        } else if constexpr (std::is_same_v<P, MlpParams>) {
          if (p.hidden < 1) bad_param("mlp: hidden must be >= 1");
          if (p.epochs < 1) bad_param("mlp: epochs must be >= 1");
          if (!(p.learning_rate > 0)) bad_param("mlp: learning_rate must be > 0");
        } else {
          if (p.k < 1) bad_param("knn: k must be >= 1");
        }
      },
      params);
}

Standardizer Standardizer::fit(const Dataset& data) {
  Standardizer s;
  const std::size_t n = data.size(), d = data.dims;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (n == 0) return s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += data.features[i * d + k];
  for (double& m : s.mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double z = data.features[i * d + k] - s.mean[k];
      var[k] += z * z;
    }
  for (std::size_t k = 0; k < d; ++k) {
    const double sd = std::sqrt(var[k] / static_cast<double>(n));
    s.scale[k] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[k])) ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean[k]) / scale[k];
  return out;
}

namespace {

double sign_of(Sentiment s) { return s == Sentiment::Positive ? 1.0 : -1.0; }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Standardized copy of the training matrix.
std::vector<double> standardized_matrix(const Dataset& data, const Standardizer& st) {
  std::vector<double> out(data.features.size());
  const std::size_t d = data.dims;
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t k = 0; k < d; ++k)
      out[i * d + k] = (data.features[i * d + k] - st.mean[k]) / st.scale[k];
  return out;
}

// ---- linear SVM ----------------------------------------------------------

LinearSvmModel train_linear_svm(const LinearSvmParams& p, const std::vector<double>& x,
                                const Dataset& data, std::uint64_t seed) {
  const std::size_t n = data.size(), d = data.dims;
  // the bias is the weight of a constant feature and is regularized with the rest
  std::vector<double> w(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (p.lambda * static_cast<double>(t));
      const double y = sign_of(data.labels[i]);
      const double* xi = x.data() + i * d;
      double margin = w[d];
      for (std::size_t k = 0; k < d; ++k) margin += w[k] * xi[k];
      margin *= y;
      const double shrink = 1.0 - eta * p.lambda;
      for (double& wk : w) wk *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < d; ++k) w[k] += eta * y * xi[k];
        w[d] += eta * y;
      }
      // projection onto the ball of radius 1/sqrt(lambda)
      const double norm2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
      const double radius2 = 1.0 / p.lambda;
      if (norm2 > radius2) {
        const double f = std::sqrt(radius2 / norm2);
        for (double& wk : w) wk *= f;
      }
    }
  }
  LinearSvmModel m;
  m.bias = w[d];
  w.pop_back();
  m.weights = std::move(w);
  return m;
}

// ---- Gaussian SVM (SMO) --------------------------------------------------

double rbf(const double* a, const double* b, std::size_t d, double gamma) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double z = a[k] - b[k];
    s += z * z;
  }
  return std::exp(-gamma * s);
}

KernelSvmModel train_gaussian_svm(const GaussianSvmParams& p, const std::vector<double>& x,
                                  const Dataset& data) {
  const std::size_t n = data.size(), d = data.dims;
  const double gamma = p.gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(d, 1)));
  const double c = p.c;

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = sign_of(data.labels[i]);
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = y[i] * y[j] * rbf(x.data() + i * d, x.data() + j * d, d, gamma);
      q[i * n + j] = q[j * n + i] = v;
    }

  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };

  for (std::size_t iter = 0; iter < p.max_iterations; ++iter) {
    // maximal violating pair
    double gmax = -INFINITY, gmin = INFINITY;
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) { gmax = v; i = t; }
      if (in_low(t) && v < gmin) { gmin = v; j = t; }
    }
    if (i == n || j == n || gmax - gmin < p.tolerance) break;

    const double old_ai = alpha[i], old_aj = alpha[j];
    const double qii = q[i * n + i], qjj = q[j * n + j], qij = q[i * n + j];
    if (y[i] != y[j]) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0) quad = 1e-12;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0) quad = 1e-12;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    const double di = alpha[i] - old_ai, dj = alpha[j] - old_aj;
    if (di == 0.0 && dj == 0.0) break;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q[t * n + i] * di + q[t * n + j] * dj;
  }

  // offset from free vectors, or the midpoint of the feasible interval
  double sum_free = 0.0, ub = INFINITY, lb = -INFINITY;
  std::size_t free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] > 0 && alpha[t] < c) {
      sum_free += yg;
      ++free;
    } else if ((alpha[t] >= c && y[t] < 0) || (alpha[t] <= 0 && y[t] > 0)) {
      ub = std::min(ub, yg);
    } else {
      lb = std::max(lb, yg);
    }
  }
  double rho = 0.0;
  if (free > 0) rho = sum_free / static_cast<double>(free);
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = (ub + lb) / 2.0;
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;

  KernelSvmModel m;
  m.dims = d;
  m.gamma = gamma;
  m.bias = -rho;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0) continue;
    m.support.insert(m.support.end(), x.begin() + static_cast<std::ptrdiff_t>(t * d),
                     x.begin() + static_cast<std::ptrdiff_t>((t + 1) * d));
    m.coef.push_back(alpha[t] * y[t]);
  }
  return m;
}

// ---- random forest -------------------------------------------------------

struct TreeBuilder {
  const std::vector<double>& x;
  const Dataset& data;
  const RandomForestParams& p;
  std::size_t features_per_split;
  Rng rng;
  std::vector<TreeNode> nodes;

  double positive_fraction(std::span<const std::size_t> idx) const {
    std::size_t pos = 0;
    for (auto i : idx) pos += data.labels[i] == Sentiment::Positive;
    return static_cast<double>(pos) / static_cast<double>(idx.size());
  }

  std::uint32_t build(std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
                      std::size_t depth) {
    const std::span<const std::size_t> here(idx.data() + begin, end - begin);
    const auto node_id = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back({});
    nodes[node_id].positive_fraction = positive_fraction(here);
    const double pf = nodes[node_id].positive_fraction;
    if (depth >= p.max_depth || here.size() < p.min_samples_split || pf == 0.0 || pf == 1.0)
      return node_id;

    const std::size_t d = data.dims;
    std::vector<std::size_t> feats(d);
    std::iota(feats.begin(), feats.end(), 0);
    const std::size_t m = std::min(features_per_split, d);
    for (std::size_t k = 0; k < m; ++k) {
      const auto r = k + static_cast<std::size_t>(rng.below(d - k));
      std::swap(feats[k], feats[r]);
    }

    const double total = static_cast<double>(here.size());
    double total_pos = 0;
    for (auto i : here) total_pos += data.labels[i] == Sentiment::Positive;
    const double parent_gini = 1.0 - (total_pos / total) * (total_pos / total) -
                               ((total - total_pos) / total) * ((total - total_pos) / total);

    double best_impurity = parent_gini - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, bool>> column(here.size());
    for (std::size_t fk = 0; fk < m; ++fk) {
      const std::size_t f = feats[fk];
      for (std::size_t t = 0; t < here.size(); ++t)
        column[t] = {x[here[t] * d + f], data.labels[here[t]] == Sentiment::Positive};
      std::sort(column.begin(), column.end());
      double left_pos = 0;
      for (std::size_t t = 0; t + 1 < column.size(); ++t) {
        left_pos += column[t].second;
        if (column[t].first == column[t + 1].first) continue;
        const double nl = static_cast<double>(t + 1), nr = total - nl;
        const double right_pos = total_pos - left_pos;
        const double gl = 1.0 - (left_pos / nl) * (left_pos / nl) -
                          ((nl - left_pos) / nl) * ((nl - left_pos) / nl);
        const double gr = 1.0 - (right_pos / nr) * (right_pos / nr) -
                          ((nr - right_pos) / nr) * ((nr - right_pos) / nr);
        const double impurity = (nl * gl + nr * gr) / total;
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = column[t].first + (column[t + 1].first - column[t].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return node_id;

    const auto f = static_cast<std::size_t>(best_feature);
    auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                     idx.begin() + static_cast<std::ptrdiff_t>(end),
                                     [&](std::size_t i) { return x[i * d + f] <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - idx.begin());
    nodes[node_id].feature = best_feature;
    nodes[node_id].threshold = best_threshold;
    const auto left = build(idx, begin, split, depth + 1);
    const auto right = build(idx, split, end, depth + 1);
    nodes[node_id].left = left;
    nodes[node_id].right = right;
    return node_id;
  }
};

ForestModel train_forest(const RandomForestParams& p, const std::vector<double>& x,
                         const Dataset& data, std::uint64_t seed) {
  const std::size_t n = data.size(), d = data.dims;
  const std::size_t per_split =
      p.features_per_split ? p.features_per_split
                           : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
  ForestModel forest;
  forest.trees.resize(p.trees);

  auto grow = [&](std::size_t t) {
    TreeBuilder b{x, data, p, std::max<std::size_t>(per_split, 1), Rng(derive_seed(seed, t)), {}};
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = static_cast<std::size_t>(b.rng.below(n));
    b.build(idx, 0, n, 0);
    forest.trees[t] = std::move(b.nodes);
  };

  std::size_t workers = p.threads ? p.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, p.trees);
  if (workers <= 1) {
    for (std::size_t t = 0; t < p.trees; ++t) grow(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < p.trees; t += workers) grow(t);
      });
  }
  return forest;
}

double forest_score(const ForestModel& f, std::span<const double> z) {
  double sum = 0.0;
  for (const auto& tree : f.trees) {
    std::uint32_t at = 0;
    while (tree[at].feature >= 0)
      at = z[static_cast<std::size_t>(tree[at].feature)] <= tree[at].threshold ? tree[at].left
                                                                               : tree[at].right;
    sum += tree[at].positive_fraction;
  }
  return sum / static_cast<double>(f.trees.size());
}

// ---- MLP -----------------------------------------------------------------

double softplus(double v) { return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }
double sigmoid(double v) {
  return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
}

MlpModel train_mlp(const MlpParams& p, const std::vector<double>& x, const Dataset& data,
                   std::uint64_t seed) {
  const std::size_t n = data.size(), d = data.dims;
  MlpModel m;
  m.inputs = d;
  m.hidden = p.hidden;
  Rng rng(seed);
  const double s1 = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(d, 1)));
  const double s2 = std::sqrt(1.0 / static_cast<double>(p.hidden));
  m.w1.resize(p.hidden * d);
  for (double& w : m.w1) w = rng.normal() * s1;
  m.b1.assign(p.hidden, 0.0);
  m.w2.resize(p.hidden);
  for (double& w : m.w2) w = rng.normal() * s2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> z(p.hidden), h(p.hidden);
  for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      const double* xi = x.data() + i * d;
      const double target = data.labels[i] == Sentiment::Positive ? 1.0 : 0.0;
      double o = m.b2;
      for (std::size_t u = 0; u < p.hidden; ++u) {
        double a = m.b1[u];
        const double* row = m.w1.data() + u * d;
        for (std::size_t k = 0; k < d; ++k) a += row[k] * xi[k];
        z[u] = a;
        h[u] = a > 0 ? a : 0.0;
        o += m.w2[u] * h[u];
      }
      const double delta = sigmoid(o) - target;
      for (std::size_t u = 0; u < p.hidden; ++u) {
        const double dz = z[u] > 0 ? delta * m.w2[u] : 0.0;
        m.w2[u] -= p.learning_rate * delta * h[u];
        if (dz != 0.0) {
          double* row = m.w1.data() + u * d;
          for (std::size_t k = 0; k < d; ++k) row[k] -= p.learning_rate * dz * xi[k];
          m.b1[u] -= p.learning_rate * dz;
        }
      }
      m.b2 -= p.learning_rate * delta;
    }
  }
  return m;
}

// ---- KNN -----------------------------------------------------------------

Sentiment knn_vote(const KnnModel& m, std::span<const double> z) {
  const std::size_t n = m.labels.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* p = m.points.data() + i * m.dims;
    for (std::size_t k = 0; k < m.dims; ++k) {
      const double diff = p[k] - z[k];
      s += diff * diff;
    }
    dist[i] = {s, i};
  }
  const std::size_t k = std::min(m.k, n);
  auto closer = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return m.ids[a.second] < m.ids[b.second];
  };
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end(), closer);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < k; ++t) pos += m.labels[dist[t].second] == Sentiment::Positive;
  if (2 * pos > k) return Sentiment::Positive;
  if (2 * pos < k) return Sentiment::Negative;
  return m.labels[dist[0].second];
}

}  // namespace

double MlpModel::probability(std::span<const double> x) const {
  double o = b2;
  for (std::size_t u = 0; u < hidden; ++u) {
    double a = b1[u];
    for (std::size_t k = 0; k < inputs; ++k) a += w1[u * inputs + k] * x[k];
    if (a > 0) o += w2[u] * a;
  }
  return sigmoid(o);
}

double MlpModel::loss(std::span<const double> x, double target) const {
  double o = b2;
  for (std::size_t u = 0; u < hidden; ++u) {
    double a = b1[u];
    for (std::size_t k = 0; k < inputs; ++k) a += w1[u * inputs + k] * x[k];
    if (a > 0) o += w2[u] * a;
  }
  // -[t log s(o) + (1-t) log(1 - s(o))] = softplus(o) - t o
  return softplus(o) - target * o;
}

MlpModel MlpModel::gradient(std::span<const double> x, double target) const {
  MlpModel g;
  g.inputs = inputs;
  g.hidden = hidden;
  g.w1.assign(w1.size(), 0.0);
  g.b1.assign(b1.size(), 0.0);
  g.w2.assign(w2.size(), 0.0);
  std::vector<double> z(hidden);
  double o = b2;
  for (std::size_t u = 0; u < hidden; ++u) {
    double a = b1[u];
    for (std::size_t k = 0; k < inputs; ++k) a += w1[u * inputs + k] * x[k];
    z[u] = a;
    if (a > 0) o += w2[u] * a;
  }
  const double delta = sigmoid(o) - target;
  g.b2 = delta;
  for (std::size_t u = 0; u < hidden; ++u) {
    if (z[u] <= 0) continue;
    g.w2[u] = delta * z[u];
    const double dz = delta * w2[u];
    g.b1[u] = dz;
    for (std::size_t k = 0; k < inputs; ++k) g.w1[u * inputs + k] = dz * x[k];
  }
  return g;
}

double& MlpModel::parameter(std::size_t i) {
  if (i < w1.size()) return w1[i];
  i -= w1.size();
  if (i < b1.size()) return b1[i];
  i -= b1.size();
  if (i < w2.size()) return w2[i];
  return b2;
}

double MlpModel::parameter(std::size_t i) const { return const_cast<MlpModel&>(*this).parameter(i); }

Sentiment Model::predict(std::span<const double> x) const {
  if (x.size() != dims_)
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(dims_) +
                                             " features, got " + std::to_string(x.size()));
  const auto z = standardizer_.apply(x);
  return std::visit(
      [&](const auto& m) -> Sentiment {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearSvmModel>) {
          return dot(m.weights, z) + m.bias > 0 ? Sentiment::Positive : Sentiment::Negative;
        } else if constexpr (std::is_same_v<M, KernelSvmModel>) {
          double f = m.bias;
          for (std::size_t i = 0; i < m.coef.size(); ++i)
            f += m.coef[i] * rbf(m.support.data() + i * m.dims, z.data(), m.dims, m.gamma);
          return f > 0 ? Sentiment::Positive : Sentiment::Negative;
        } else if constexpr (std::is_same_v<M, ForestModel>) {
          return forest_score(m, z) >= 0.5 ? Sentiment::Positive : Sentiment::Negative;
        } else if constexpr (std::is_same_v<M, MlpModel>) {
          return m.probability(z) >= 0.5 ? Sentiment::Positive : Sentiment::Negative;
        } else {
          return knn_vote(m, z);
        }
      },
      params_);
}

Model train(const ClassifierSpec& spec, const Dataset& data) {
  spec.validate();
  if (data.empty()) throw Error(Errc::EmptyDataset, "cannot train on an empty dataset");
  data.validate();
  if (spec.kind() != ClassifierKind::KNN && !data.has_both_labels())
    throw Error(Errc::SingleClassData,
                std::string(to_string(spec.kind())) + " needs both labels in the training data");

  Standardizer st = Standardizer::fit(data);
  const auto x = standardized_matrix(data, st);
  Model::Parameters params = std::visit(
      [&](const auto& p) -> Model::Parameters {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearSvmParams>) {
          return train_linear_svm(p, x, data, spec.seed);
        } else if constexpr (std::is_same_v<P, GaussianSvmParams>) {
          return train_gaussian_svm(p, x, data);
        } else if constexpr (std::is_same_v<P, RandomForestParams>) {
          return train_forest(p, x, data, spec.seed);
        } else if constexpr (std::is_same_v<P, MlpParams>) {
          return train_mlp(p, x, data, spec.seed);
        } else {
          return KnnModel{p.k, data.dims, x, data.labels, data.ids};
        }
      },
      spec.params);
  return Model(data.dims, std::move(st), std::move(params));
}

Evaluation evaluate(const Model& model, const Dataset& test) {
  Evaluation ev;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool ok = model.predict(test.row(i)) == test.labels[i];
    auto& tally = test.labels[i] == Sentiment::Positive ? ev.positive : ev.negative;
    ++tally.total;
    ++ev.total;
    if (ok) {
      ++tally.correct;
      ++ev.correct;
    }
  }
  if (ev.total > 0)
    ev.accuracy_pct = 100.0 * static_cast<double>(ev.correct) / static_cast<double>(ev.total);
  return ev;
}

}  // namespace polarkit
