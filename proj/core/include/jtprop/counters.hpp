#pragma once

#include <algorithm>
#include <cstdint>

namespace jtprop {

/// Abstract cost accounting for the propagation engines. Arithmetic counters
/// record table-value operations; aux entries track working-table values that
/// are live at once, excluding stored factors and messages.
struct OpCounters {
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
  std::uint64_t divisions = 0;
  std::uint64_t table_writes = 0;

  std::uint64_t aux_entries_now = 0;
  std::uint64_t peak_aux_entries = 0;

  std::uint64_t multiplicative_ops() const noexcept { return multiplications + divisions; }

  void merge_arith(const OpCounters& o) noexcept {
    multiplications += o.multiplications;
    additions += o.additions;
    divisions += o.divisions;
    table_writes += o.table_writes;
    peak_aux_entries = std::max(peak_aux_entries, o.peak_aux_entries);
  }
};

inline void count_mul(OpCounters* c, std::uint64_t k = 1) { if (c) c->multiplications += k; }
inline void count_add(OpCounters* c, std::uint64_t k = 1) { if (c) c->additions += k; }
inline void count_div(OpCounters* c, std::uint64_t k = 1) { if (c) c->divisions += k; }
inline void count_write(OpCounters* c, std::uint64_t k = 1) { if (c) c->table_writes += k; }

inline void aux_acquire(OpCounters* c, std::uint64_t n) {
  if (!c) return;
  c->aux_entries_now += n;
  c->peak_aux_entries = std::max(c->peak_aux_entries, c->aux_entries_now);
}
inline void aux_release(OpCounters* c, std::uint64_t n) {
  if (!c) return;
  c->aux_entries_now -= n;
}

/// Scoped aux-entry reservation.
class AuxReservation {
 public:
  AuxReservation(OpCounters* c, std::uint64_t n) : c_(c), n_(n) { aux_acquire(c_, n_); }
  ~AuxReservation() { aux_release(c_, n_); }
  AuxReservation(const AuxReservation&) = delete;
  AuxReservation& operator=(const AuxReservation&) = delete;

  void grow(std::uint64_t extra) {
    aux_acquire(c_, extra);
    n_ += extra;
  }

 private:
  OpCounters* c_;
  std::uint64_t n_;
};

}  // namespace jtprop
