#include "omv/engine_dynamic.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "omv/io.hpp"

namespace omv {

namespace {

std::size_t ceil_log2(std::size_t x) {
  std::size_t i = 0;
  while ((std::size_t{1} << i) < x) ++i;
  return i;
}

bool get_bit(const std::vector<Word>& col, std::size_t pos) {
  return (col[pos / kWordBits] >> (pos % kWordBits)) & 1u;
}

void set_bit(std::vector<Word>& col, std::size_t pos) {
  col[pos / kWordBits] |= Word{1} << (pos % kWordBits);
}

std::size_t rank_in(const std::vector<std::uint64_t>& sorted, std::uint64_t id) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), id) -
                                  sorted.begin());
}

void erase_id(std::vector<std::uint64_t>& sorted, std::uint64_t id) {
  sorted.erase(sorted.begin() + static_cast<std::ptrdiff_t>(rank_in(sorted, id)));
}

}  // namespace

DynOmv::DynOmv(const BitMatrix& initial) {
  const std::size_t m = initial.rows();
  const std::size_t n = initial.cols();
  const std::size_t top_bucket = ceil_log2(std::max<std::size_t>(n, 1));
  const std::size_t top_stripe = ceil_log2(std::max<std::size_t>(m, 1));

  buckets_.resize(top_bucket + 1);
  stripes_.resize(top_stripe + 1);
  for (Stripe& s : stripes_) {
    s.payload.resize(buckets_.size());
    s.engine.resize(buckets_.size());
  }

  for (std::size_t j = 0; j < n; ++j) {
    buckets_[top_bucket].ids.push_back(j);
    buckets_[top_bucket].dead.push_back(0);
    col_loc_[j] = {top_bucket, j};
    live_cols_.push_back(j);
  }
  next_col_id_ = n;

  Stripe& top = stripes_[top_stripe];
  for (std::size_t i = 0; i < m; ++i) {
    top.row_ids.push_back(i);
    top.row_dead.push_back(0);
    row_loc_[i] = {top_stripe, i};
    live_rows_.push_back(i);
  }
  next_row_id_ = m;

  // Every stripe carries a payload slot per stored column; only the top
  // stripe has rows, so only its columns carry bits.
  const std::size_t words = words_for(m);
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    stripes_[s].payload[top_bucket].assign(n, {});
    if (s != top_stripe) continue;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Word> col(words, 0);
      for (std::size_t i = 0; i < m; ++i) {
        if (initial.get(i, j)) set_bit(col, i);
      }
      stripes_[s].payload[top_bucket][j] = std::move(col);
    }
  }
  rebuild_engine(top_stripe, top_bucket, false);
}

void DynOmv::ensure_bucket(std::size_t b) {
  while (buckets_.size() <= b) {
    buckets_.emplace_back();
    for (Stripe& s : stripes_) {
      s.payload.emplace_back();
      s.engine.emplace_back();
    }
  }
}

void DynOmv::ensure_stripe(std::size_t j) {
  while (stripes_.size() <= j) {
    Stripe s;
    s.payload.resize(buckets_.size());
    s.engine.resize(buckets_.size());
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      s.payload[b].assign(buckets_[b].ids.size(), {});
    }
    stripes_.push_back(std::move(s));
  }
}

void DynOmv::rebuild_engine(std::size_t stripe, std::size_t bucket, bool from_col_insert) {
  Stripe& s = stripes_[stripe];
  if (s.row_ids.empty() || buckets_[bucket].ids.empty()) {
    s.engine[bucket].reset();
    return;
  }
  if (from_col_insert) s.insert_rebuilt_cols += buckets_[bucket].ids.size();
  BitMatrix mat = BitMatrix::from_packed_columns(s.row_ids.size(), s.payload[bucket]);
  s.engine[bucket] = StaticOmv::preprocess(std::move(mat));
}

std::size_t DynOmv::live_col_rank(std::uint64_t id) const { return rank_in(live_cols_, id); }
std::size_t DynOmv::live_row_rank(std::uint64_t id) const { return rank_in(live_rows_, id); }

std::uint64_t DynOmv::insert_col(const BitVec& bits) {
  if (bits.size() != live_rows_.size()) {
    throw std::invalid_argument("insert_col: column length " + std::to_string(bits.size()) +
                                " does not match live row count " +
                                std::to_string(live_rows_.size()));
  }
  const std::uint64_t id = next_col_id_++;

  for (Stripe& s : stripes_) {
    std::vector<Word> col(words_for(s.row_ids.size()), 0);
    for (std::size_t t = 0; t < s.row_ids.size(); ++t) {
      if (s.row_dead[t]) continue;
      if (bits[live_row_rank(s.row_ids[t])]) set_bit(col, t);
    }
    s.payload[0].push_back(std::move(col));
  }
  buckets_[0].ids.push_back(id);
  buckets_[0].dead.push_back(0);
  col_loc_[id] = {0, buckets_[0].ids.size() - 1};
  live_cols_.push_back(id);

  std::vector<char> changed(buckets_.size(), 0);
  changed[0] = 1;
  std::size_t i = 0;
  while (buckets_[i].ids.size() > (std::size_t{1} << i)) {
    ensure_bucket(i + 1);
    if (changed.size() < buckets_.size()) changed.resize(buckets_.size(), 0);
    BucketMeta& src = buckets_[i];
    BucketMeta& dst = buckets_[i + 1];
    for (std::size_t t = 0; t < src.ids.size(); ++t) {
      if (src.dead[t]) {
        col_loc_.erase(src.ids[t]);  // postponed deletion resolves here
        continue;
      }
      dst.ids.push_back(src.ids[t]);
      dst.dead.push_back(0);
      col_loc_[src.ids[t]] = {i + 1, dst.ids.size() - 1};
      for (Stripe& s : stripes_) s.payload[i + 1].push_back(std::move(s.payload[i][t]));
    }
    src.ids.clear();
    src.dead.clear();
    src.tombstones = 0;
    for (Stripe& s : stripes_) s.payload[i].clear();
    changed[i] = 1;
    changed[i + 1] = 1;
    ++i;
  }

  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    if (!changed[b]) continue;
    for (std::size_t s = 0; s < stripes_.size(); ++s) rebuild_engine(s, b, true);
  }
  return id;
}

void DynOmv::delete_col(std::uint64_t id) {
  auto it = col_loc_.find(id);
  if (it == col_loc_.end()) {
    throw std::invalid_argument("delete_col: unknown or already-deleted id " + std::to_string(id));
  }
  auto [b, t] = it->second;
  buckets_[b].dead[t] = 1;
  ++buckets_[b].tombstones;
  col_loc_.erase(it);
  erase_id(live_cols_, id);
  if (2 * buckets_[b].tombstones >= (std::size_t{1} << b)) purge_bucket(b);
}

void DynOmv::purge_bucket(std::size_t b) {
  BucketMeta& bk = buckets_[b];
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < bk.ids.size(); ++t) {
    if (!bk.dead[t]) keep.push_back(t);
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    ids.push_back(bk.ids[keep[k]]);
    col_loc_[ids.back()] = {b, k};
  }
  bk.ids = std::move(ids);
  bk.dead.assign(bk.ids.size(), 0);
  bk.tombstones = 0;
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    std::vector<std::vector<Word>> kept;
    kept.reserve(keep.size());
    for (std::size_t t : keep) kept.push_back(std::move(stripes_[s].payload[b][t]));
    stripes_[s].payload[b] = std::move(kept);
    rebuild_engine(s, b, false);
  }
}

std::uint64_t DynOmv::insert_row(const BitVec& bits) {
  if (bits.size() != live_cols_.size()) {
    throw std::invalid_argument("insert_row: row length " + std::to_string(bits.size()) +
                                " does not match live column count " +
                                std::to_string(live_cols_.size()));
  }
  const std::uint64_t id = next_row_id_++;

  Stripe& s0 = stripes_[0];
  const std::size_t new_count = s0.row_ids.size() + 1;
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    for (std::size_t t = 0; t < buckets_[b].ids.size(); ++t) {
      std::vector<Word>& col = s0.payload[b][t];
      col.resize(words_for(new_count), 0);
      if (buckets_[b].dead[t]) continue;
      if (bits[live_col_rank(buckets_[b].ids[t])]) set_bit(col, new_count - 1);
    }
  }
  s0.row_ids.push_back(id);
  s0.row_dead.push_back(0);
  row_loc_[id] = {0, s0.row_ids.size() - 1};
  live_rows_.push_back(id);

  std::vector<char> changed(stripes_.size(), 0);
  changed[0] = 1;
  std::size_t j = 0;
  while (stripes_[j].row_ids.size() > (std::size_t{1} << j)) {
    ensure_stripe(j + 1);
    if (changed.size() < stripes_.size()) changed.resize(stripes_.size(), 0);
    Stripe& src = stripes_[j];
    Stripe& dst = stripes_[j + 1];

    std::vector<std::size_t> live_slots;
    for (std::size_t t = 0; t < src.row_ids.size(); ++t) {
      if (!src.row_dead[t]) live_slots.push_back(t);
    }
    const std::size_t base = dst.row_ids.size();
    const std::size_t dst_count = base + live_slots.size();
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      for (std::size_t t = 0; t < buckets_[b].ids.size(); ++t) {
        std::vector<Word>& dcol = dst.payload[b][t];
        dcol.resize(words_for(dst_count), 0);
        const std::vector<Word>& scol = src.payload[b][t];
        for (std::size_t k = 0; k < live_slots.size(); ++k) {
          if (get_bit(scol, live_slots[k])) set_bit(dcol, base + k);
        }
      }
    }
    for (std::size_t k = 0; k < live_slots.size(); ++k) {
      std::uint64_t rid = src.row_ids[live_slots[k]];
      dst.row_ids.push_back(rid);
      dst.row_dead.push_back(0);
      row_loc_[rid] = {j + 1, base + k};
    }
    src.row_ids.clear();
    src.row_dead.clear();
    src.row_tombstones = 0;
    for (auto& bucket_cols : src.payload) {
      for (auto& col : bucket_cols) col.clear();
    }
    changed[j] = 1;
    changed[j + 1] = 1;
    ++j;
  }

  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    if (!changed[s]) continue;
    for (std::size_t b = 0; b < buckets_.size(); ++b) rebuild_engine(s, b, false);
  }
  return id;
}

void DynOmv::delete_row(std::uint64_t id) {
  auto it = row_loc_.find(id);
  if (it == row_loc_.end()) {
    throw std::invalid_argument("delete_row: unknown or already-deleted id " + std::to_string(id));
  }
  auto [j, t] = it->second;
  stripes_[j].row_dead[t] = 1;
  ++stripes_[j].row_tombstones;
  row_loc_.erase(it);
  erase_id(live_rows_, id);
  if (2 * stripes_[j].row_tombstones >= (std::size_t{1} << j)) purge_stripe_rows(j);
}

void DynOmv::purge_stripe_rows(std::size_t j) {
  Stripe& s = stripes_[j];
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < s.row_ids.size(); ++t) {
    if (!s.row_dead[t]) keep.push_back(t);
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    ids.push_back(s.row_ids[keep[k]]);
    row_loc_[ids.back()] = {j, k};
  }
  s.row_ids = std::move(ids);
  s.row_dead.assign(s.row_ids.size(), 0);
  s.row_tombstones = 0;
  const std::size_t words = words_for(s.row_ids.size());
  for (auto& bucket_cols : s.payload) {
    for (auto& col : bucket_cols) {
      std::vector<Word> packed(words, 0);
      for (std::size_t k = 0; k < keep.size(); ++k) {
        if (get_bit(col, keep[k])) set_bit(packed, k);
      }
      col = std::move(packed);
    }
  }
  for (std::size_t b = 0; b < buckets_.size(); ++b) rebuild_engine(j, b, false);
}

RealVector DynOmv::query(const RealVector& v, QueryStats* stats) const {
  if (v.size() != live_cols_.size()) {
    throw std::invalid_argument("query: vector length " + std::to_string(v.size()) +
                                " does not match live column count " +
                                std::to_string(live_cols_.size()));
  }
  RealVector out(live_rows_.size(), 0.0);
  QueryStats total;
  for (const Stripe& s : stripes_) {
    if (s.row_ids.empty()) continue;
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      if (buckets_[b].ids.empty() || !s.engine[b]) continue;
      RealVector u(buckets_[b].ids.size(), 0.0);
      for (std::size_t t = 0; t < u.size(); ++t) {
        if (!buckets_[b].dead[t]) u[t] = v[live_col_rank(buckets_[b].ids[t])];
      }
      QueryStats st;
      RealVector y = s.engine[b]->mv(u, &st);
      total.touched_nonzeros += st.touched_nonzeros;
      total.dense_ops += st.dense_ops;
      for (std::size_t t = 0; t < s.row_ids.size(); ++t) {
        if (!s.row_dead[t]) out[live_row_rank(s.row_ids[t])] += y[t];
      }
    }
  }
  if (stats) *stats = total;
  return out;
}

BitMatrix DynOmv::materialize() const {
  BitMatrix out(live_rows_.size(), live_cols_.size());
  for (const Stripe& s : stripes_) {
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      for (std::size_t t = 0; t < buckets_[b].ids.size(); ++t) {
        if (b < s.payload.size() && t < s.payload[b].size()) {
          if (buckets_[b].dead[t]) continue;
          std::size_t cj = live_col_rank(buckets_[b].ids[t]);
          const std::vector<Word>& col = s.payload[b][t];
          for (std::size_t u = 0; u < s.row_ids.size(); ++u) {
            if (!s.row_dead[u] && get_bit(col, u)) {
              out.set(live_row_rank(s.row_ids[u]), cj);
            }
          }
        }
      }
    }
  }
  return out;
}

void DynOmv::audit() const {
  auto fail = [](const std::string& what) { throw std::logic_error("DynOmv audit: " + what); };

  std::size_t live_cols_seen = 0;
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    const BucketMeta& bk = buckets_[b];
    const std::size_t cap = std::size_t{1} << b;
    if (bk.ids.size() > cap) fail("bucket " + std::to_string(b) + " over stored capacity");
    if (2 * bk.tombstones >= cap && bk.tombstones > 0) {
      fail("bucket " + std::to_string(b) + " over tombstone quota");
    }
    std::size_t dead_count = 0;
    for (std::size_t t = 0; t < bk.ids.size(); ++t) {
      if (bk.dead[t]) {
        ++dead_count;
        continue;
      }
      ++live_cols_seen;
      auto it = col_loc_.find(bk.ids[t]);
      if (it == col_loc_.end() || it->second != std::make_pair(b, t)) {
        fail("column id " + std::to_string(bk.ids[t]) + " has a stale location");
      }
    }
    if (dead_count != bk.tombstones) fail("bucket tombstone count out of sync");
  }
  if (live_cols_seen != live_cols_.size()) fail("live column count mismatch");

  std::size_t live_rows_seen = 0;
  for (std::size_t j = 0; j < stripes_.size(); ++j) {
    const Stripe& s = stripes_[j];
    const std::size_t cap = std::size_t{1} << j;
    if (s.row_ids.size() > cap) fail("stripe " + std::to_string(j) + " over stored capacity");
    if (2 * s.row_tombstones >= cap && s.row_tombstones > 0) {
      fail("stripe " + std::to_string(j) + " over tombstone quota");
    }
    std::size_t dead_count = 0;
    for (std::size_t t = 0; t < s.row_ids.size(); ++t) {
      if (s.row_dead[t]) {
        ++dead_count;
        continue;
      }
      ++live_rows_seen;
      auto it = row_loc_.find(s.row_ids[t]);
      if (it == row_loc_.end() || it->second != std::make_pair(j, t)) {
        fail("row id " + std::to_string(s.row_ids[t]) + " has a stale location");
      }
    }
    if (dead_count != s.row_tombstones) fail("stripe tombstone count out of sync");
    if (s.payload.size() != buckets_.size()) fail("stripe payload bucket count mismatch");
    const std::size_t words = words_for(s.row_ids.size());
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      if (s.payload[b].size() != buckets_[b].ids.size()) {
        fail("stripe payload column count mismatch in bucket " + std::to_string(b));
      }
      for (const auto& col : s.payload[b]) {
        if (col.size() != words) fail("stored column has wrong word count");
      }
      bool should_have_engine = !s.row_ids.empty() && !buckets_[b].ids.empty();
      if (should_have_engine != s.engine[b].has_value()) fail("engine presence out of sync");
    }
  }
  if (live_rows_seen != live_rows_.size()) fail("live row count mismatch");
}

std::vector<std::pair<std::size_t, std::size_t>> DynOmv::bucket_occupancy() const {
  std::vector<std::pair<std::size_t, std::size_t>> occ;
  occ.reserve(buckets_.size());
  for (const BucketMeta& bk : buckets_) occ.emplace_back(bk.ids.size(), bk.tombstones);
  return occ;
}

std::vector<std::pair<std::size_t, std::size_t>> DynOmv::stripe_occupancy() const {
  std::vector<std::pair<std::size_t, std::size_t>> occ;
  occ.reserve(stripes_.size());
  for (const Stripe& s : stripes_) occ.emplace_back(s.row_ids.size(), s.row_tombstones);
  return occ;
}

std::uint64_t DynOmv::insert_rebuilt_columns(std::size_t stripe) const {
  return stripes_.at(stripe).insert_rebuilt_cols;
}

std::size_t DynOmv::engine_weight() const {
  std::size_t w = 0;
  for (const Stripe& s : stripes_) {
    for (const auto& engine : s.engine) {
      if (engine) w += std::min(engine->row_tree().weight, engine->col_tree().weight);
    }
  }
  return w;
}

namespace {

std::vector<std::string> tokenize(std::string line) {
  for (char& c : line) {
    if (c == ',') c = ' ';
  }
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

std::vector<TraceOp> read_trace(std::istream& in) {
  std::vector<TraceOp> ops;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;
    TraceOp op;
    const std::string& cmd = toks[0];
    auto parse_id = [&](const std::string& tok) {
      try {
        return static_cast<std::uint64_t>(std::stoull(tok));
      } catch (const std::exception&) {
        throw ParseError(lineno, "expected id, got '" + tok + "'");
      }
    };
    if (cmd == "INSCOL" || cmd == "INSROW") {
      if (toks.size() < 2 || toks[1] != "coo") {
        throw ParseError(lineno, cmd + " expects 'coo' followed by set positions");
      }
      op.kind = (cmd == "INSCOL") ? TraceOp::Kind::InsCol : TraceOp::Kind::InsRow;
      for (std::size_t k = 2; k < toks.size(); ++k) {
        op.coords.push_back(static_cast<std::size_t>(parse_id(toks[k])));
      }
    } else if (cmd == "DELCOL" || cmd == "DELROW") {
      if (toks.size() != 2) throw ParseError(lineno, cmd + " expects one id");
      op.kind = (cmd == "DELCOL") ? TraceOp::Kind::DelCol : TraceOp::Kind::DelRow;
      op.id = parse_id(toks[1]);
    } else if (cmd == "QUERY") {
      if (toks.size() != 2) throw ParseError(lineno, "QUERY expects one vector file path");
      op.kind = TraceOp::Kind::Query;
      op.vector_path = toks[1];
    } else {
      throw ParseError(lineno, "unknown trace command '" + cmd + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<TraceOp> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return read_trace(in);
}

}  // namespace omv
