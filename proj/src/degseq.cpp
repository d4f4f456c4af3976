#include "balload/degseq.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <unordered_set>

namespace balload {

int default_workers() {
  if (const char* env = std::getenv("BALANCED_LOADS_WORKERS")) {
    int value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) return value;
  }
  return 1;
}

namespace {

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DegreeSpecError("bad number '" + text + "' in degree spec '" + spec + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw DegreeSpecError("bad number '" + text + "' in degree spec '" + spec + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

DegreeDistribution DegreeDistribution::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw DegreeSpecError("degree spec '" + spec + "' needs the form kind:parameters");
  }
  const std::string kind = trim(spec.substr(0, colon));
  std::string body = trim(spec.substr(colon + 1));
  if (kind == "poisson") return poisson(parse_number(body, spec));
  if (kind == "regular") {
    const double d = parse_number(body, spec);
    if (d < 0 || d != std::floor(d)) throw DegreeSpecError("regular degree must be a non-negative integer");
    return regular(static_cast<int>(d));
  }
  if (kind == "explicit") {
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
      body = body.substr(1, body.size() - 2);
    }
    std::vector<double> pmf;
    std::size_t start = 0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const auto piece = trim(body.substr(start, comma == std::string::npos ? std::string::npos
                                                                            : comma - start));
      pmf.push_back(parse_number(piece, spec));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return from_pmf(std::move(pmf), "explicit:" + body);
  }
  throw DegreeSpecError("unknown degree distribution '" + kind + "'");
}

DegreeDistribution DegreeDistribution::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DegreeSpecError("poisson rate must be >= 0");
  std::vector<double> pmf;
  double term = std::exp(-lambda);
  double mass = 0.0;
  for (int k = 0;; ++k) {
    if (k > 0) term *= lambda / k;
    pmf.push_back(term);
    mass += term;
    if (k >= lambda && 1.0 - mass < 1e-12) break;
    if (k > 100000) throw DegreeSpecError("poisson rate too large");
  }
  for (double& p : pmf) p /= mass;
  DegreeDistribution out;
  out.pmf_ = std::move(pmf);
  char buf[64];
  std::snprintf(buf, sizeof buf, "poisson:%.17g", lambda);
  out.label_ = buf;
  return out;
}

DegreeDistribution DegreeDistribution::regular(int d) {
  if (d < 0) throw DegreeSpecError("regular degree must be >= 0");
  DegreeDistribution out;
  out.pmf_.assign(static_cast<std::size_t>(d) + 1, 0.0);
  out.pmf_[d] = 1.0;
  out.label_ = "regular:" + std::to_string(d);
  return out;
}

DegreeDistribution DegreeDistribution::from_pmf(std::vector<double> pmf, std::string label) {
  if (pmf.empty()) throw DegreeSpecError("empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DegreeSpecError("pmf entries must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DegreeSpecError("pmf sums to " + std::to_string(total) + ", expected 1");
  }
  for (double& p : pmf) p /= total;
  while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();
  DegreeDistribution out;
  out.pmf_ = std::move(pmf);
  out.label_ = label.empty() ? "explicit" : std::move(label);
  return out;
}

double DegreeDistribution::operator[](int k) const {
  if (k < 0 || k > max_degree()) return 0.0;
  return pmf_[k];
}

double DegreeDistribution::mean() const {
  double m = 0.0;
  for (int k = 0; k <= max_degree(); ++k) m += k * pmf_[k];
  return m;
}

bool DegreeDistribution::has_mass_above_one() const { return (*this)[0] + (*this)[1] < 1.0; }

double DegreeDistribution::exponential_moment(double theta) const {
  double s = 0.0;
  for (int k = 0; k <= max_degree(); ++k) s += pmf_[k] * std::exp(theta * k);
  return s;
}

DegreeDistribution size_bias(const DegreeDistribution& pi) {
  const double mean = pi.mean();
  if (!(mean > 0.0)) throw std::invalid_argument("size-biasing needs a positive mean");
  std::vector<double> hat(static_cast<std::size_t>(std::max(pi.max_degree(), 1)), 0.0);
  for (int n = 0; n + 1 <= pi.max_degree(); ++n) hat[n] = (n + 1) * pi[n + 1] / mean;
  return DegreeDistribution::from_pmf(std::move(hat), "size-biased " + pi.label());
}

DegreeSequence sample_degree_sequence(const DegreeDistribution& pi, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  Rng rng = make_rng(seed);
  std::discrete_distribution<int> draw(pi.pmf().begin(), pi.pmf().end());
  DegreeSequence d(static_cast<std::size_t>(n));
  long long sum = 0;
  for (auto& x : d) {
    x = draw(rng);
    sum += x;
  }
  if (sum % 2 != 0) ++d.back();
  return d;
}

namespace {

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Graph pairing_model(const DegreeSequence& d, Rng& rng, MultiEdgePolicy policy) {
  long long total = 0;
  for (int x : d) {
    if (x < 0) throw std::invalid_argument("negative degree");
    total += x;
  }
  if (total % 2 != 0) throw std::invalid_argument("degree sum is odd");
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(total));
  for (std::size_t v = 0; v < d.size(); ++v) stubs.insert(stubs.end(), d[v], static_cast<int>(v));
  const int n = static_cast<int>(d.size());

  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<std::uint64_t> keys;
    keys.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      if (stubs[k] == stubs[k + 1]) {
        simple = false;
        continue;
      }
      keys.push_back(pair_key(stubs[k], stubs[k + 1]));
    }
    std::sort(keys.begin(), keys.end());
    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (std::size_t k = 0; k < keys.size();) {
      std::size_t j = k;
      while (j < keys.size() && keys[j] == keys[k]) ++j;
      const bool repeated = j - k > 1;
      if (repeated) simple = false;
      if (!repeated || policy == MultiEdgePolicy::KeepOne) {
        edges.push_back({static_cast<int>(keys[k] >> 32), static_cast<int>(keys[k] & 0xffffffffu)});
      }
      k = j;
    }
    if (policy == MultiEdgePolicy::Reject && !simple) continue;
    return Graph(n, std::move(edges));
  }
  throw std::runtime_error("no simple pairing found in " + std::to_string(kMaxAttempts) + " attempts");
}

Graph pairing_model(const DegreeSequence& d, std::uint64_t seed, MultiEdgePolicy policy) {
  Rng rng = make_rng(seed);
  return pairing_model(d, rng, policy);
}

Graph erdos_renyi_nm(int n, std::int64_t m, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (m < 0 || m > pairs) {
    throw std::invalid_argument("m = " + std::to_string(m) + " exceeds the " +
                                std::to_string(pairs) + " available pairs");
  }
  Rng rng = make_rng(seed);
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  std::vector<std::int64_t> order;
  order.reserve(static_cast<std::size_t>(m));
  for (std::int64_t j = pairs - m; j < pairs; ++j) {
    const std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, j)(rng);
    const std::int64_t pick = chosen.insert(r).second ? r : j;
    if (pick == j) chosen.insert(j);
    order.push_back(pick);
  }
  std::vector<Edge> edges;
  edges.reserve(order.size());
  for (const std::int64_t k : order) {
    // k = v (v - 1) / 2 + u with u < v
    auto v = static_cast<std::int64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
    while (v * (v - 1) / 2 > k) --v;
    while ((v + 1) * v / 2 <= k) ++v;
    const std::int64_t u = k - v * (v - 1) / 2;
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  return Graph(n, std::move(edges));
}

double exponential_moment(const DegreeSequence& d, double theta) {
  if (d.empty()) return 0.0;
  double s = 0.0;
  for (int x : d) s += std::exp(theta * x);
  return s / static_cast<double>(d.size());
}

}  // namespace balload
