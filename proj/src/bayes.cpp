#include "fbmseg/bayes.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace fbmseg {
namespace {

const char* class_name(Label c) { return c == Label::myocardium ? "myocardium" : "blood_pool"; }

double log_score(const ClassStats& s, const Vector5d& z) {
  double acc = std::log(s.prior);
  for (int i = 0; i < 5; ++i) {
    const double d = z[i] - s.mean[i];
    acc -= 0.5 * std::log(2.0 * std::numbers::pi * s.var[i]) + d * d / (2.0 * s.var[i]);
  }
  return acc;
}

std::string join(const Vector5d& v) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < 5; ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

Vector5d parse5(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  Vector5d v;
  for (int i = 0; i < 5; ++i)
    if (!(is >> v[i])) throw FormatError("model: `" + key + "` needs 5 numbers");
  std::string extra;
  if (is >> extra) throw FormatError("model: trailing data in `" + key + "`");
  if (!v.allFinite()) throw FormatError("model: non-finite value in `" + key + "`");
  return v;
}

}  // namespace

GaussianNBModel train(std::span<const LabeledFeature> samples, const TrainOptions& options) {
  if (!(options.variance_floor > 0.0)) throw TrainingError("train: variance floor must be positive");
  std::size_t nb = 0, nm = 0;
  for (const auto& s : samples) {
    if (s.label == Label::blood_pool)
      ++nb;
    else if (s.label == Label::myocardium)
      ++nm;
    else
      throw TrainingError("train: samples must be labeled blood_pool or myocardium");
    if (!s.features.vector().allFinite()) throw TrainingError("train: non-finite feature");
  }
  if (nb < 2 || nm < 2) throw TrainingError("train: each class needs at least 2 samples");

  const double n = static_cast<double>(samples.size());
  GaussianNBModel model;
  model.variance_floor = options.variance_floor;
  model.patch = options.patch;
  model.map_config = options.map_config;

  Vector5d mean = Vector5d::Zero();
  for (const auto& s : samples) mean += s.features.vector();
  mean /= n;
  Vector5d var = Vector5d::Zero();
  for (const auto& s : samples) var += (s.features.vector() - mean).cwiseAbs2();
  var /= n;
  model.norm.mean = mean;
  // A feature constant over the training set carries no information; leave it unscaled.
  model.norm.sigma = var.cwiseSqrt().unaryExpr([](double s) { return s > 0.0 ? s : 1.0; });

  for (Label c : {Label::blood_pool, Label::myocardium}) {
    ClassStats& st = c == Label::myocardium ? model.myo : model.blood;
    const double nc = static_cast<double>(c == Label::myocardium ? nm : nb);
    st.prior = nc / n;
    st.mean.setZero();
    for (const auto& s : samples)
      if (s.label == c) st.mean += model.norm.apply(s.features.vector());
    st.mean /= nc;
    st.var.setZero();
    for (const auto& s : samples)
      if (s.label == c) st.var += (model.norm.apply(s.features.vector()) - st.mean).cwiseAbs2();
    st.var = (st.var / nc).cwiseMax(options.variance_floor);
  }
  return model;
}

Prediction predict(const GaussianNBModel& model, const Vector5d& raw) {
  const Vector5d z = model.norm.apply(raw);
  const double lb = log_score(model.blood, z);
  const double lm = log_score(model.myo, z);
  Prediction p;
  const double d = lm - lb;
  if (d > 0.0) {
    p.posterior_myo = 1.0 / (1.0 + std::exp(-d));
    p.posterior_blood = 1.0 - p.posterior_myo;
  } else {
    p.posterior_blood = 1.0 / (1.0 + std::exp(d));
    p.posterior_myo = 1.0 - p.posterior_blood;
  }
  if (lm > lb) {
    p.label = Label::myocardium;
    p.posterior = p.posterior_myo;
  } else {
    p.label = Label::blood_pool;
    p.posterior = p.posterior_blood;
  }
  return p;
}

Prediction predict(const GaussianNBModel& model, const FeatureVector& features) { return predict(model, features.vector()); }

std::string model_to_text(const GaussianNBModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << "classes: blood_pool myocardium\n";
  os << "priors: " << model.blood.prior << ' ' << model.myo.prior << '\n';
  for (Label c : {Label::blood_pool, Label::myocardium}) {
    const auto& s = model.stats(c);
    os << "mean_" << class_name(c) << ": " << join(s.mean) << '\n';
    os << "var_" << class_name(c) << ": " << join(s.var) << '\n';
  }
  os << "feat_norm_mean: " << join(model.norm.mean) << '\n';
  os << "feat_norm_sigma: " << join(model.norm.sigma) << '\n';
  os << "var_floor: " << model.variance_floor << '\n';
  os << "patch: " << model.patch[0] << ' ' << model.patch[1] << ' ' << model.patch[2] << '\n';
  os << "map_config: " << model.map_config << '\n';
  return os.str();
}

GaussianNBModel model_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("model: malformed line `" + line + "`");
    std::string value = line.substr(colon + 1);
    const auto first = value.find_first_not_of(" \t");
    value = first == std::string::npos ? std::string{} : value.substr(first);
    kv[line.substr(0, colon)] = value;
  }
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw FormatError("model: missing key `" + k + "`");
    return it->second;
  };

  if (get("classes") != "blood_pool myocardium") throw FormatError("model: unsupported class list");
  GaussianNBModel m;
  {
    std::istringstream ps(get("priors"));
    if (!(ps >> m.blood.prior >> m.myo.prior)) throw FormatError("model: bad priors");
  }
  m.blood.mean = parse5("mean_blood_pool", get("mean_blood_pool"));
  m.blood.var = parse5("var_blood_pool", get("var_blood_pool"));
  m.myo.mean = parse5("mean_myocardium", get("mean_myocardium"));
  m.myo.var = parse5("var_myocardium", get("var_myocardium"));
  m.norm.mean = parse5("feat_norm_mean", get("feat_norm_mean"));
  m.norm.sigma = parse5("feat_norm_sigma", get("feat_norm_sigma"));
  if (kv.count("var_floor")) m.variance_floor = std::stod(kv["var_floor"]);
  {
    std::istringstream ps(get("patch"));
    if (!(ps >> m.patch[0] >> m.patch[1] >> m.patch[2])) throw FormatError("model: bad patch");
  }
  m.map_config = get("map_config");

  if (!(m.blood.prior > 0.0 && m.myo.prior > 0.0) || std::abs(m.blood.prior + m.myo.prior - 1.0) > 1e-9)
    throw FormatError("model: priors must be positive and sum to 1");
  if (!((m.blood.var.array() > 0.0).all() && (m.myo.var.array() > 0.0).all() && (m.norm.sigma.array() > 0.0).all()))
    throw FormatError("model: variances must be positive");
  for (int p : m.patch)
    if (p < 1) throw FormatError("model: patch extents must be positive");
  return m;
}

void save_model(const GaussianNBModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << model_to_text(model);
  if (!out) throw IoError("write failed: " + path.string());
}

GaussianNBModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_text(ss.str());
}

}  // namespace fbmseg
