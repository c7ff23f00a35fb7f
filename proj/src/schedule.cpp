#include "adyn/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace adyn {

namespace {

std::vector<NodeSet> unroll(const ScheduleWitness& w, std::size_t len) {
  std::vector<NodeSet> out;
  out.reserve(len);
  for (NodeSet s : w.prefix) {
    if (out.size() == len) return out;
    out.push_back(s);
  }
  while (out.size() < len)
    for (NodeSet s : w.cycle) {
      if (out.size() == len) break;
      out.push_back(s);
    }
  return out;
}

}  // namespace

bool witness_is_r_fair(const ScheduleWitness& w, int r, int n) {
  if (r < 1) throw SpecError("r must be >= 1");
  if (w.cycle.empty()) throw SpecError("witness cycle must be nonempty");
  // Every window of the infinite schedule starts in the prefix or in the
  // first cycle copy; unroll far enough to evaluate all of them.
  std::size_t starts = w.prefix.size() + w.cycle.size();
  std::vector<NodeSet> sched = unroll(w, starts + static_cast<std::size_t>(r));
  NodeSet all = full_set(n);
  for (std::size_t s = 0; s < starts; ++s) {
    NodeSet seen = 0;
    for (std::size_t t = s; t < s + static_cast<std::size_t>(r); ++t) seen |= sched[t];
    if ((seen & all) != all) return false;
  }
  return true;
}

int witness_fairness_bound(const ScheduleWitness& w, int n) {
  NodeSet covered = 0;
  for (NodeSet s : w.cycle) covered |= s;
  if ((covered & full_set(n)) != full_set(n)) return 0;
  int max_r = static_cast<int>(w.prefix.size() + 2 * w.cycle.size());
  for (int r = 1; r <= max_r; ++r)
    if (witness_is_r_fair(w, r, n)) return r;
  return max_r;  // cycle covers all nodes, so prefix+2*cycle windows always do
}

std::string format_witness(const ScheduleWitness& w) {
  std::string out;
  for (NodeSet s : w.prefix) out += format_node_set(s) + "\n";
  out += "---\n";
  for (NodeSet s : w.cycle) out += format_node_set(s) + "\n";
  return out;
}

ScheduleWitness parse_witness(const std::string& text) {
  ScheduleWitness w;
  std::istringstream in(text);
  std::string line;
  bool in_cycle = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line == "---") {
      if (in_cycle) throw SpecError("witness line " + std::to_string(lineno) + ": second ---");
      in_cycle = true;
      continue;
    }
    NodeSet s = 0;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      std::size_t used = 0;
      int node = 0;
      try {
        node = std::stoi(tok, &used);
      } catch (...) {
        throw SpecError("witness line " + std::to_string(lineno) + ": bad node '" + tok + "'");
      }
      if (used != tok.size() || node < 1 || node > guard::max_nodes)
        throw SpecError("witness line " + std::to_string(lineno) + ": bad node '" + tok + "'");
      s |= node_bit(node);
    }
    if (s == 0) throw SpecError("witness line " + std::to_string(lineno) + ": empty set");
    (in_cycle ? w.cycle : w.prefix).push_back(s);
  }
  if (!in_cycle) throw SpecError("witness has no --- separator");
  if (w.cycle.empty()) throw SpecError("witness cycle is empty");
  return w;
}

ScheduleSource ScheduleSource::round_robin(int n) {
  if (n < 1) throw SpecError("round robin needs n >= 1");
  ScheduleSource s(ScheduleKind::round_robin, n);
  s.r_ = n;
  return s;
}

ScheduleSource ScheduleSource::random_fair(int n, int r, std::uint64_t seed) {
  if (n < 1) throw SpecError("random fair schedule needs n >= 1");
  if (r < 1) throw SpecError("random fair schedule needs r >= 1");
  ScheduleSource s(ScheduleKind::random_fair, n);
  s.r_ = r;
  s.seed_ = seed;
  s.reset();
  return s;
}

ScheduleSource ScheduleSource::from_witness(int n, ScheduleWitness w) {
  if (w.cycle.empty()) throw SpecError("witness cycle is empty");
  ScheduleSource s(ScheduleKind::witness, n);
  s.witness_ = std::move(w);
  s.r_ = witness_fairness_bound(s.witness_, n);
  return s;
}

ScheduleSource ScheduleSource::all_subsets(int n) {
  if (n < 1 || n > guard::max_nodes) throw SpecError("all-subsets enumerator needs 1 <= n <= 30");
  ScheduleSource s(ScheduleKind::all_subsets, n);
  s.r_ = 0;
  return s;
}

void ScheduleSource::reset() {
  pos_ = 0;
  if (kind_ == ScheduleKind::random_fair) {
    rng_.seed(seed_);
    idle_.assign(static_cast<std::size_t>(n_), 0);
  }
}

NodeSet ScheduleSource::next() {
  switch (kind_) {
    case ScheduleKind::round_robin: {
      NodeSet s = node_bit(static_cast<int>(pos_ % n_) + 1);
      ++pos_;
      return s;
    }
    case ScheduleKind::all_subsets: {
      NodeSet count = full_set(n_);
      NodeSet s = static_cast<NodeSet>(pos_ % count) + 1;
      ++pos_;
      return s;
    }
    case ScheduleKind::witness: {
      std::uint64_t i = pos_++;
      if (i < witness_.prefix.size()) return witness_.prefix[i];
      i -= witness_.prefix.size();
      return witness_.cycle[i % witness_.cycle.size()];
    }
    case ScheduleKind::random_fair: {
      // Forced activations keep the r-window property by construction: a node
      // idle for r-1 steps must act now.
      NodeSet s = 0;
      for (int i = 0; i < n_; ++i) {
        if (idle_[i] >= r_ - 1 || (rng_() & 1))
          s |= node_bit(i + 1);
      }
      if (s == 0) s = node_bit(static_cast<int>(rng_() % n_) + 1);
      for (int i = 0; i < n_; ++i) idle_[i] = contains(s, i + 1) ? 0 : idle_[i] + 1;
      ++pos_;
      return s;
    }
  }
  throw SpecError("unreachable schedule kind");
}

ScheduleSource make_schedule(ScheduleKind kind, int n, int r, std::uint64_t seed,
                             const ScheduleWitness* w) {
  switch (kind) {
    case ScheduleKind::round_robin: return ScheduleSource::round_robin(n);
    case ScheduleKind::random_fair: return ScheduleSource::random_fair(n, r, seed);
    case ScheduleKind::all_subsets: return ScheduleSource::all_subsets(n);
    case ScheduleKind::witness:
      if (!w) throw SpecError("witness schedule needs a witness");
      return ScheduleSource::from_witness(n, *w);
  }
  throw SpecError("unreachable schedule kind");
}

}  // namespace adyn
