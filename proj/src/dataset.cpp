#include "gpclass/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace gpclass {

std::string label_name(ClassLabel l) {
  return l == ClassLabel::L1 ? "l1" : "l2";
}

ClassLabel parse_label(const std::string& text) {
  std::string t;
  for (char c : text)
    t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "l1") return ClassLabel::L1;
  if (t == "l2") return ClassLabel::L2;
  throw MalformedRow("<label>", 0, "unknown label '" + text + "'");
}

void validate_dataset(const LabelledDataset& d) {
  const Eigen::Index n = d.n();
  if (n < 2) throw DataError("dataset needs at least 2 points");
  if (static_cast<Eigen::Index>(d.labels.size()) != n)
    throw DimensionMismatch("labels vs points");
  bool has1 = false, has2 = false;
  for (auto l : d.labels) (l == ClassLabel::L1 ? has1 : has2) = true;
  if (!has1 || !has2) throw SingleClassData();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((d.points.row(i) - d.points.row(j)).norm() == 0.0)
        throw DuplicatePoint(static_cast<std::size_t>(i),
                             static_cast<std::size_t>(j));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    std::size_t b = 0;
    while (b < field.size() && field[b] == ' ') ++b;
    out.push_back(field.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::pair<double, double>> data_bounds(const Eigen::MatrixXd& X) {
  std::vector<std::pair<double, double>> b;
  for (Eigen::Index k = 0; k < X.cols(); ++k)
    b.emplace_back(X.col(k).minCoeff(), X.col(k).maxCoeff());
  return b;
}

}  // namespace

LabelledDataset load_dataset(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line))
    throw MalformedRow(path, 0, "empty file");
  ++row;
  auto header = split_csv_line(line);
  if (static_cast<int>(header.size()) != p + 1)
    throw MalformedRow(path, row, "expected " + std::to_string(p + 1) +
                                      " header fields");
  std::vector<Eigen::VectorXd> pts;
  std::vector<ClassLabel> labels;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != p + 1)
      throw MalformedRow(path, row, "expected " + std::to_string(p + 1) +
                                        " fields, got " +
                                        std::to_string(fields.size()));
    Eigen::VectorXd x(p);
    for (int k = 0; k < p; ++k) {
      try {
        std::size_t used = 0;
        x[k] = std::stod(fields[k], &used);
        if (used != fields[k].size())
          throw MalformedRow(path, row, "trailing characters in '" +
                                            fields[k] + "'");
      } catch (const MalformedRow&) {
        throw;
      } catch (const std::exception&) {
        throw MalformedRow(path, row, "not a number: '" + fields[k] + "'");
      }
      if (!std::isfinite(x[k]))
        throw MalformedRow(path, row, "non-finite coordinate");
    }
    try {
      labels.push_back(parse_label(fields[p]));
    } catch (const MalformedRow&) {
      throw MalformedRow(path, row, "unknown label '" + fields[p] + "'");
    }
    pts.push_back(std::move(x));
  }
  LabelledDataset d;
  d.points.resize(static_cast<Eigen::Index>(pts.size()), p);
  for (std::size_t i = 0; i < pts.size(); ++i)
    d.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  d.labels = std::move(labels);
  d.bounds = data_bounds(d.points);
  validate_dataset(d);
  return d;
}

LabelledDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::string line;
  if (!std::getline(in, line)) throw MalformedRow(path, 0, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2)
    throw MalformedRow(path, 1, "header needs coordinates and a label column");
  return load_dataset(path, static_cast<int>(header.size()) - 1);
}

std::pair<LabelledDataset, TransformRecord> center_dataset(
    const LabelledDataset& d) {
  validate_dataset(d);
  const Eigen::Index p = d.p();
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(p), c2 = Eigen::VectorXd::Zero(p);
  double n1 = 0, n2 = 0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.labels[i] == ClassLabel::L1) {
      c1 += d.points.row(i).transpose();
      n1 += 1;
    } else {
      c2 += d.points.row(i).transpose();
      n2 += 1;
    }
  }
  TransformRecord t;
  t.shift = 0.5 * (c1 / n1 + c2 / n2);
  t.scale.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double range = d.points.col(k).maxCoeff() - d.points.col(k).minCoeff();
    t.scale[k] = range > 0.0 ? range / 2.0 : 1.0;
  }
  LabelledDataset out = d;
  out.points = apply_transform(d.points, t);
  out.bounds.clear();
  for (Eigen::Index k = 0; k < p; ++k)
    out.bounds.emplace_back((d.bounds[k].first - t.shift[k]) / t.scale[k],
                            (d.bounds[k].second - t.shift[k]) / t.scale[k]);
  out.transform = t;
  return {out, t};
}

Eigen::MatrixXd apply_transform(const Eigen::MatrixXd& points,
                                const TransformRecord& t) {
  if (points.cols() != t.shift.size())
    throw DimensionMismatch("transform vs points");
  Eigen::MatrixXd out = points;
  out.rowwise() -= t.shift.transpose();
  out.array().rowwise() /= t.scale.transpose().array();
  return out;
}

Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& points,
                                  const TransformRecord& t) {
  if (points.cols() != t.shift.size())
    throw DimensionMismatch("transform vs points");
  Eigen::MatrixXd out = points;
  out.array().rowwise() *= t.scale.transpose().array();
  out.rowwise() += t.shift.transpose();
  return out;
}

Eigen::MatrixXd latin_hypercube(
    int n, const std::vector<std::pair<double, double>>& bounds, Rng& rng) {
  const int p = static_cast<int>(bounds.size());
  for (int k = 0; k < p; ++k)
    if (!(bounds[k].first < bounds[k].second))
      throw EmptyBounds(static_cast<std::size_t>(k));
  Eigen::MatrixXd X(n, p);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int k = 0; k < p; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with our own stream for platform-stable shuffles
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
    const double lo = bounds[k].first, hi = bounds[k].second;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      X(i, k) = lo + (hi - lo) * (perm[static_cast<std::size_t>(i)] + u) / n;
    }
  }
  return X;
}

double min_pairwise_distance(const Eigen::MatrixXd& X) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = i + 1; j < X.rows(); ++j)
      best = std::min(best, (X.row(i) - X.row(j)).norm());
  return best;
}

Eigen::MatrixXd maximin_lhs(int n,
                            const std::vector<std::pair<double, double>>& bounds,
                            int restarts, Rng& rng) {
  if (restarts < 1) throw UsageError("maximin_lhs needs restarts >= 1");
  Eigen::MatrixXd best;
  double best_d = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd cand = latin_hypercube(n, bounds, rng);
    const double d = min_pairwise_distance(cand);
    if (d > best_d) {
      best_d = d;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace gpclass
