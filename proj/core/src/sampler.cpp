// Copyright 2026 The tempord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempord/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace tempord {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::local_unif: return "local-unif";
    case Scheme::high_prob: return "high-prob";
    case Scheme::accept_reject: return "accept-reject";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "local-unif") return Scheme::local_unif;
  if (name == "high-prob") return Scheme::high_prob;
  if (name == "accept-reject") return Scheme::accept_reject;
  fail(ErrorKind::parse, "unknown scheme `" + std::string(name) + "`");
}

TrainingPairs::TrainingPairs(const PartialOrder& pairs, std::size_t n0)
    : order_(pairs.closed()) {
  const std::size_t n = order_.n();
  older_.resize(n);
  younger_count_.assign(n, 0);
  for (auto [u, v] : order_.pairs()) {
    require(v >= n0, ErrorKind::contract, "a seed node cannot be younger than another node");
    older_[v].push_back(u);
    ++younger_count_[u];
    ++count_;
  }
}

PathSampler::PathSampler(const Graph& h, double p, double r, Scheme scheme,
                         const TrainingPairs* restriction)
    : h_(&h),
      scheme_(scheme),
      restriction_(restriction && !restriction->empty() ? restriction : nullptr),
      state_(h, p, r) {
  const std::size_t n = h.capacity();
  if (restriction_)
    require(restriction_->order().n() == n, ErrorKind::contract,
            "training pairs and graph have different node counts");
  nr_.assign(n, 0);
  epos_.assign(n, 0);
  in_eligible_.assign(n, 0);
  node_lw_.assign(n, neg_inf);
}

void PathSampler::add_eligible(NodeId v) {
  epos_[v] = static_cast<std::uint32_t>(eligible_.size());
  eligible_.push_back(v);
  in_eligible_[v] = 1;
}

void PathSampler::drop_eligible(NodeId v) {
  const std::uint32_t i = epos_[v];
  const NodeId last = eligible_.back();
  eligible_[i] = last;
  epos_[last] = i;
  eligible_.pop_back();
  in_eligible_[v] = 0;
}

void PathSampler::reset() {
  state_.reset();
  removed_.clear();
  for (NodeId u : eligible_) in_eligible_[u] = 0;
  eligible_.clear();
  for (NodeId u : state_.alive_nodes()) {
    nr_[u] = restriction_ ? restriction_->younger_count(u) : 0;
    if (!h_->is_seed(u) && nr_[u] == 0) add_eligible(u);
  }
}

double PathSampler::compute_candidates(bool need_all) {
  cand_.clear();
  cand_lw_.clear();
  if (!need_all && state_.generic()) return neg_inf;
  for (NodeId v : eligible_) {
    const double lw = state_.log_step_likelihood(v);
    node_lw_[v] = lw;
    if (lw == neg_inf) continue;
    cand_.push_back(v);
    cand_lw_.push_back(lw);
  }
  return log_sum_exp(cand_lw_);
}

std::vector<NodeId> PathSampler::first_step_candidates() {
  reset();
  if (state_.alive_count() <= h_->n0()) return {};
  compute_candidates(true);
  std::vector<NodeId> out = cand_;
  std::sort(out.begin(), out.end());
  return out;
}

double PathSampler::run(Rng& rng) {
  reset();
  double log_weight = 0.0;
  while (state_.alive_count() > h_->n0()) {
    if (eligible_.empty())
      fail(ErrorKind::contract, "every remaining node is restricted by the training pairs");
    const bool generic = state_.generic();
    NodeId v = 0;
    if (scheme_ == Scheme::high_prob) {
      const double total = compute_candidates(true);
      if (total == neg_inf) return neg_inf;
      // draw proportional to w
      double u = uniform01(rng);
      std::size_t pick = cand_.size() - 1;
      for (std::size_t i = 0; i < cand_.size(); ++i) {
        u -= std::exp(cand_lw_[i] - total);
        if (u < 0.0) {
          pick = i;
          break;
        }
      }
      v = cand_[pick];
      log_weight += total;
    } else if (generic) {
      const double count = static_cast<double>(eligible_.size());
      if (scheme_ == Scheme::local_unif) {
        v = eligible_[uniform_index(rng, eligible_.size())];
      } else {
        const auto alive = state_.alive_nodes();
        do {
          v = alive[uniform_index(rng, alive.size())];
        } while (!in_eligible_[v]);
      }
      const double lw = state_.log_step_likelihood(v);
      if (lw == neg_inf) return neg_inf;
      log_weight += lw + std::log(count);
    } else {
      if (compute_candidates(true) == neg_inf) return neg_inf;
      const double count = static_cast<double>(cand_.size());
      if (scheme_ == Scheme::local_unif) {
        v = cand_[uniform_index(rng, cand_.size())];
      } else {
        const auto alive = state_.alive_nodes();
        do {
          v = alive[uniform_index(rng, alive.size())];
        } while (!in_eligible_[v] || node_lw_[v] == neg_inf);
      }
      log_weight += node_lw_[v] + std::log(count);
    }
    state_.remove(v);
    drop_eligible(v);
    removed_.push_back(v);
    if (restriction_) {
      for (NodeId u : restriction_->older_than(v))
        if (--nr_[u] == 0 && state_.alive(u) && !h_->is_seed(u)) add_eligible(u);
    }
  }
  return log_weight;
}

SamplePath sample_path(const Graph& h, double p, double r, Scheme scheme,
                       const TrainingPairs* restriction, Rng& rng) {
  PathSampler s(h, p, r, scheme, restriction);
  SamplePath out;
  out.log_weight = s.run(rng);
  out.removed.assign(s.removed().begin(), s.removed().end());
  return out;
}

// ---------------------------------------------------------------------------
// weights

double WeightSummary::log_mean() const {
  return paths == 0 ? neg_inf : log_sum - std::log(static_cast<double>(paths));
}

double WeightSummary::mean() const { return std::exp(log_mean()); }

double WeightSummary::standard_error() const {
  if (paths < 2 || log_sum == neg_inf) return 0.0;
  const double k = static_cast<double>(paths);
  // scale by the mean to keep the arithmetic in range
  const double lm = log_mean();
  const double m2 = std::exp(log_sum_sq - 2.0 * lm) / k;  // E[W^2] / mean^2
  const double var = std::max(0.0, (m2 - 1.0) * k / (k - 1.0));
  return std::exp(lm) * std::sqrt(var / k);
}

double WeightSummary::effective_sample_size() const {
  if (log_sum == neg_inf) return 0.0;
  return std::exp(2.0 * log_sum - log_sum_sq);
}

namespace {

// Sums of W, W^2, and W-weighted indicators, all scaled by exp(-max_log).
struct Accumulator {
  double max_log = neg_inf;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t zero_paths = 0;
  std::vector<double> before;  // upper triangle over compact free indices
  std::vector<double> later;   // per free index: W * (free nodes arriving later)
  std::vector<double> pairs;   // requested pairs: W * [u before v]

  void init(std::size_t free, bool dense, std::size_t npairs, bool accumulate) {
    if (!accumulate) return;
    if (dense) before.assign(pair_count(free), 0.0);
    later.assign(free, 0.0);
    pairs.assign(npairs, 0.0);
  }

  void scale(double f) {
    sum_w *= f;
    sum_w2 *= f * f;
    for (auto& x : before) x *= f;
    for (auto& x : later) x *= f;
    for (auto& x : pairs) x *= f;
  }

  // Returns the scaled weight of a path with log weight lw.
  double admit(double lw) {
    ++paths;
    if (lw == neg_inf) {
      ++zero_paths;
      return 0.0;
    }
    if (lw > max_log) {
      if (max_log != neg_inf) scale(std::exp(max_log - lw));
      max_log = lw;
    }
    const double w = std::exp(lw - max_log);
    sum_w += w;
    sum_w2 += w * w;
    return w;
  }

  void merge(const Accumulator& o) {
    paths += o.paths;
    zero_paths += o.zero_paths;
    if (o.max_log == neg_inf) return;
    double fa = 1.0, fb = 1.0;
    if (o.max_log > max_log) {
      fa = max_log == neg_inf ? 0.0 : std::exp(max_log - o.max_log);
      max_log = o.max_log;
    } else {
      fb = std::exp(o.max_log - max_log);
    }
    sum_w = sum_w * fa + o.sum_w * fb;
    sum_w2 = sum_w2 * fa * fa + o.sum_w2 * fb * fb;
    for (std::size_t i = 0; i < before.size(); ++i) before[i] = before[i] * fa + o.before[i] * fb;
    for (std::size_t i = 0; i < later.size(); ++i) later[i] = later[i] * fa + o.later[i] * fb;
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = pairs[i] * fa + o.pairs[i] * fb;
  }
};

struct Layout {
  std::vector<NodeId> free;           // compact index -> node id
  std::vector<std::uint32_t> index;   // node id -> compact index
  bool dense = true;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // compact
};

void accumulate_path(Accumulator& acc, const Layout& L, std::span<const NodeId> removed,
                     double w, std::vector<std::uint32_t>& pos) {
  const std::size_t k = L.free.size();
  if (acc.later.empty() || w == 0.0) return;
  // arrival position: the last removed node arrived first
  for (std::size_t i = 0; i < k; ++i) pos[L.index[removed[i]]] = static_cast<std::uint32_t>(k - 1 - i);
  for (std::size_t u = 0; u < k; ++u) acc.later[u] += w * static_cast<double>(k - 1 - pos[u]);
  if (L.dense) {
    double* row = acc.before.data();
    for (std::size_t u = 0; u < k; ++u) {
      const std::uint32_t pu = pos[u];
      const std::size_t len = k - u - 1;
      const std::uint32_t* pv = pos.data() + u + 1;
      for (std::size_t j = 0; j < len; ++j) row[j] += pu < pv[j] ? w : 0.0;
      row += len;
    }
  }
  for (std::size_t i = 0; i < L.pairs.size(); ++i)
    if (pos[L.pairs[i].first] < pos[L.pairs[i].second]) acc.pairs[i] += w;
}

std::uint64_t fingerprint(const Graph& h, double p, double r, const SamplerOptions& o,
                          const TrainingPairs* t) {
  std::uint64_t x = derive_seed(o.seed, to_string(o.scheme), o.paths, o.block_size);
  auto mixin = [&](std::uint64_t y) { x = Rng::mix(x ^ (y + 0x9e3779b97f4a7c15ULL)); };
  std::uint64_t bits;
  std::memcpy(&bits, &p, sizeof bits);
  mixin(bits);
  std::memcpy(&bits, &r, sizeof bits);
  mixin(bits);
  mixin(h.capacity());
  mixin(h.n0());
  for (NodeId u : h.nodes())
    for (NodeId v : h.neighbors(u))
      if (u < v) mixin((std::uint64_t{u} << 32) | v);
  if (t)
    for (auto [a, b] : t->order().pairs()) mixin((std::uint64_t{a} << 32) | (b ^ 0x5555));
  for (auto [a, b] : o.pairs) mixin((std::uint64_t{a} << 32) | (b ^ 0xaaaa));
  mixin(o.accumulate ? 1 : 0);
  return x;
}

void put_hex(std::ostream& out, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  out << buf;
}

double get_hex(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) fail(ErrorKind::parse, "truncated checkpoint");
  char* end = nullptr;
  const double x = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') fail(ErrorKind::parse, "bad number in checkpoint");
  return x;
}

void put_vec(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << ' ' << v.size() << '\n';
  for (double x : v) {
    put_hex(out, x);
    out << '\n';
  }
}

void get_vec(std::istream& in, const char* name, std::vector<double>& v) {
  std::string key;
  std::size_t n = 0;
  if (!(in >> key >> n) || key != name || n != v.size())
    fail(ErrorKind::parse, std::string("checkpoint field `") + name + "` does not match");
  for (auto& x : v) x = get_hex(in);
}

void write_checkpoint(const std::string& path, std::uint64_t fp, std::uint64_t blocks_done,
                      const Accumulator& acc) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorKind::io, "cannot write checkpoint " + tmp);
    out << "tempord-checkpoint 1\n";
    out << "fingerprint " << fp << '\n';
    out << "blocks " << blocks_done << '\n';
    out << "paths " << acc.paths << ' ' << acc.zero_paths << '\n';
    out << "max_log ";
    put_hex(out, acc.max_log);
    out << "\nsums ";
    put_hex(out, acc.sum_w);
    out << ' ';
    put_hex(out, acc.sum_w2);
    out << '\n';
    put_vec(out, "before", acc.before);
    put_vec(out, "later", acc.later);
    put_vec(out, "pairs", acc.pairs);
    if (!out) fail(ErrorKind::io, "cannot write checkpoint " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(ErrorKind::io, "cannot move checkpoint into place: " + path);
}

std::optional<std::uint64_t> read_checkpoint(const std::string& path, std::uint64_t fp,
                                             Accumulator& acc) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string key;
  std::uint64_t version = 0, file_fp = 0, blocks = 0;
  if (!(in >> key >> version) || key != "tempord-checkpoint" || version != 1)
    fail(ErrorKind::parse, "not a checkpoint file: " + path);
  if (!(in >> key >> file_fp) || key != "fingerprint")
    fail(ErrorKind::parse, "checkpoint without fingerprint");
  if (file_fp != fp)
    fail(ErrorKind::contract, "checkpoint belongs to a different run configuration");
  if (!(in >> key >> blocks) || key != "blocks") fail(ErrorKind::parse, "checkpoint without block count");
  if (!(in >> key >> acc.paths >> acc.zero_paths) || key != "paths")
    fail(ErrorKind::parse, "checkpoint without path counts");
  if (!(in >> key) || key != "max_log") fail(ErrorKind::parse, "checkpoint without max_log");
  acc.max_log = get_hex(in);
  if (!(in >> key) || key != "sums") fail(ErrorKind::parse, "checkpoint without sums");
  acc.sum_w = get_hex(in);
  acc.sum_w2 = get_hex(in);
  get_vec(in, "before", acc.before);
  get_vec(in, "later", acc.later);
  get_vec(in, "pairs", acc.pairs);
  return blocks;
}

Accumulator run_block(const Graph& h, double p, double r, const SamplerOptions& o,
                      const TrainingPairs* t, const Layout& L, std::uint64_t first,
                      std::uint64_t last) {
  Accumulator acc;
  acc.init(L.free.size(), L.dense, L.pairs.size(), o.accumulate);
  PathSampler sampler(h, p, r, o.scheme, t);
  std::vector<std::uint32_t> pos(L.free.size());
  for (std::uint64_t i = first; i < last; ++i) {
    Rng rng(derive_seed(o.seed, "path", i));
    const double lw = sampler.run(rng);
    const double w = acc.admit(lw);
    accumulate_path(acc, L, sampler.removed(), w, pos);
  }
  return acc;
}

}  // namespace

PuvEstimate estimate_puv(const Graph& h, double p, double r, const SamplerOptions& o,
                         const TrainingPairs* restriction) {
  require(o.paths >= 1, ErrorKind::contract, "at least one sample path is required");
  require(o.block_size >= 1, ErrorKind::contract, "block size must be positive");
  if (restriction && restriction->empty()) restriction = nullptr;

  Layout L;
  const std::size_t n = h.capacity();
  L.index.assign(n, 0);
  for (NodeId u : h.nodes())
    if (!h.is_seed(u)) {
      L.index[u] = static_cast<std::uint32_t>(L.free.size());
      L.free.push_back(u);
    }
  L.dense = n <= o.dense_limit;
  for (auto [a, b] : o.pairs) {
    require(a < n && b < n && a != b, ErrorKind::contract, "requested pair outside the graph");
    if (!h.is_seed(a) && !h.is_seed(b)) L.pairs.emplace_back(L.index[a], L.index[b]);
  }

  const std::uint64_t fp = fingerprint(h, p, r, o, restriction);
  const std::uint64_t blocks = (o.paths + o.block_size - 1) / o.block_size;
  Accumulator total;
  total.init(L.free.size(), L.dense, L.pairs.size(), o.accumulate);
  std::uint64_t next = 0;
  if (o.resume && !o.checkpoint_path.empty()) {
    if (auto done = read_checkpoint(o.checkpoint_path, fp, total)) next = *done;
  }

  const unsigned threads = std::max(1U, o.threads);
  bool stopped = false;
  while (next < blocks) {
    const std::uint64_t wave = std::min<std::uint64_t>(threads, blocks - next);
    std::vector<Accumulator> parts(wave);
    auto work = [&](std::uint64_t j) {
      const std::uint64_t b = next + j;
      parts[j] = run_block(h, p, r, o, restriction, L, b * o.block_size,
                           std::min(o.paths, (b + 1) * o.block_size));
    };
    if (wave == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(wave);
      for (std::uint64_t j = 0; j < wave; ++j)
        pool.emplace_back([&, j] {
          try {
            work(j);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (std::uint64_t j = 0; j < wave; ++j) {
      total.merge(parts[j]);
      ++next;
      if (!o.checkpoint_path.empty() && o.checkpoint_every > 0 &&
          (next % o.checkpoint_every == 0 || next == blocks))
        write_checkpoint(o.checkpoint_path, fp, next, total);
      if (o.stop_after_blocks > 0 && next >= o.stop_after_blocks && next < blocks) {
        stopped = true;
        break;
      }
    }
    if (stopped) break;
  }

  PuvEstimate out;
  out.complete = !stopped;
  out.dense = L.dense;
  out.weights.paths = total.paths;
  out.weights.zero_paths = total.zero_paths;
  if (total.max_log != neg_inf) {
    out.weights.log_sum = total.max_log + std::log(total.sum_w);
    out.weights.log_sum_sq = 2.0 * total.max_log + std::log(total.sum_w2);
  }
  if (!o.accumulate) return out;
  if (total.sum_w == 0.0)
    fail(ErrorKind::numerical, "every sample path has zero weight");

  const std::size_t k = L.free.size();
  const std::size_t n0 = h.n0();
  out.scores.assign(n, 0.0);
  for (NodeId u = 0; u < n0; ++u)
    out.scores[u] = 0.5 * static_cast<double>(n0 - 1) + static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) out.scores[L.free[i]] = total.later[i] / total.sum_w;
  if (L.dense) {
    out.matrix = PuvMatrix(n, n0);
    const double* row = total.before.data();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j)
        out.matrix.set(L.free[i], L.free[j], std::clamp(row[j - i - 1] / total.sum_w, 0.0, 1.0));
      row += k - i - 1;
    }
    if (restriction)
      for (auto [a, b] : restriction->order().pairs()) out.matrix.set(a, b, 1.0);
    out.matrix.provenance = std::string("sampled ") + to_string(o.scheme) +
                            " k=" + std::to_string(total.paths);
  }
  std::size_t j = 0;
  for (auto [a, b] : o.pairs) {
    double x;
    if (h.is_seed(a) && h.is_seed(b)) {
      x = 0.5;
    } else if (h.is_seed(a) || h.is_seed(b)) {
      x = h.is_seed(a) ? 1.0 : 0.0;
    } else {
      x = std::clamp(total.pairs[j++] / total.sum_w, 0.0, 1.0);
      if (restriction && restriction->order().precedes(a, b)) x = 1.0;
      if (restriction && restriction->order().precedes(b, a)) x = 0.0;
    }
    out.pairs.emplace_back(a, b, x);
  }
  return out;
}

WeightSummary weighted_mean_check(const Graph& h, double p, double r, Scheme scheme,
                                  std::uint64_t paths, std::uint64_t seed, unsigned threads) {
  SamplerOptions o;
  o.scheme = scheme;
  o.paths = paths;
  o.seed = seed;
  o.threads = threads;
  o.accumulate = false;
  return estimate_puv(h, p, r, o).weights;
}

}  // namespace tempord
