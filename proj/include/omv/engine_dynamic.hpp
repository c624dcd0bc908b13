#ifndef OMV_ENGINE_DYNAMIC_HPP
#define OMV_ENGINE_DYNAMIC_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "omv/bitmatrix.hpp"
#include "omv/engine_static.hpp"

namespace omv {

using BitVec = std::vector<std::uint8_t>;

/// Fully dynamic matrix-vector engine. Rows live in geometric stripes and
/// columns in geometric buckets; bucket i carries at most 2^i stored columns
/// and rebuilds its static engine at binary-counter cadence, so updates cost
/// amortized O(m) / O(n) engine-column rebuilds. Deletions are tombstoned and
/// postponed until a bucket (or stripe) accumulates 2^i/2 of them.
///
/// Rows and columns are addressed by stable ids: the initial matrix occupies
/// ids 0..m-1 / 0..n-1 and every insertion returns the next fresh id. The
/// logical matrix orders live rows and columns by ascending id; query vectors
/// and results use that order. Updates are serialized; between updates any
/// number of concurrent queries are safe.
class DynOmv {
 public:
  explicit DynOmv(const BitMatrix& initial);

  std::size_t live_row_count() const { return live_rows_.size(); }
  std::size_t live_col_count() const { return live_cols_.size(); }
  const std::vector<std::uint64_t>& live_rows() const { return live_rows_; }
  const std::vector<std::uint64_t>& live_cols() const { return live_cols_; }

  /// bits[k] is the entry for the k-th live row (ascending id). Returns the new column's id.
  std::uint64_t insert_col(const BitVec& bits);
  /// bits[k] is the entry for the k-th live column (ascending id). Returns the new row's id.
  std::uint64_t insert_row(const BitVec& bits);

  void delete_col(std::uint64_t id);
  void delete_row(std::uint64_t id);

  /// v over live columns ascending by id; result over live rows ascending by id.
  RealVector query(const RealVector& v, QueryStats* stats = nullptr) const;

  /// Current logical matrix (live rows x live cols), assembled from the buckets.
  BitMatrix materialize() const;

  /// Verify every structural invariant; throws std::logic_error on violation.
  void audit() const;

  // Debug occupancy: (stored, tombstones) per column bucket / per row stripe.
  std::vector<std::pair<std::size_t, std::size_t>> bucket_occupancy() const;
  std::vector<std::pair<std::size_t, std::size_t>> stripe_occupancy() const;

  /// Columns fed into engine rebuilds triggered by column insertions, per stripe.
  std::uint64_t insert_rebuilt_columns(std::size_t stripe) const;

  /// Sum of the cheaper tree weight over all live bucket engines; the
  /// query-cost parameter applications can size against.
  std::size_t engine_weight() const;

 private:
  struct BucketMeta {
    std::vector<std::uint64_t> ids;  // stored column ids, slot order
    std::vector<char> dead;
    std::size_t tombstones = 0;
  };

  struct Stripe {
    std::vector<std::uint64_t> row_ids;  // stored row ids, slot order
    std::vector<char> row_dead;
    std::size_t row_tombstones = 0;
    // payload[bucket][slot] = packed column bits over this stripe's stored rows
    std::vector<std::vector<std::vector<Word>>> payload;
    std::vector<std::optional<StaticOmv>> engine;
    std::uint64_t insert_rebuilt_cols = 0;
  };

  void ensure_bucket(std::size_t b);
  void ensure_stripe(std::size_t j);
  void rebuild_engine(std::size_t stripe, std::size_t bucket, bool from_col_insert);
  void purge_bucket(std::size_t b);
  void purge_stripe_rows(std::size_t j);
  std::size_t live_col_rank(std::uint64_t id) const;
  std::size_t live_row_rank(std::uint64_t id) const;

  std::vector<BucketMeta> buckets_;
  std::vector<Stripe> stripes_;
  std::vector<std::uint64_t> live_rows_, live_cols_;  // ascending (ids are monotone)
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> col_loc_;  // id -> (bucket, slot)
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> row_loc_;  // id -> (stripe, slot)
  std::uint64_t next_row_id_ = 0;
  std::uint64_t next_col_id_ = 0;
};

/// One command of a replayable update/query trace.
struct TraceOp {
  enum class Kind { InsCol, InsRow, DelCol, DelRow, Query };
  Kind kind;
  std::vector<std::size_t> coords;  // set positions for inserts (current live ranks)
  std::uint64_t id = 0;             // target for deletes
  std::string vector_path;          // vector file for queries
};

/// Trace file: one command per line (`INSCOL coo <i...>`, `INSROW coo <j...>`,
/// `DELCOL <id>`, `DELROW <id>`, `QUERY <vector file>`), `#` comments allowed.
std::vector<TraceOp> read_trace(std::istream& in);
std::vector<TraceOp> read_trace_file(const std::string& path);

}  // namespace omv

#endif
