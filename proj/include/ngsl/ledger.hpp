#ifndef NGSL_LEDGER_HPP
#define NGSL_LEDGER_HPP

// Information ledger for horizon transits.
//
// When a particle of mass m_a crosses the horizon, the hole's gravitational
// information I = M / T_H changes by two equal first-order terms:
//
//   sense term:  M * d(1/T_H)  with d(1/T_H) = 8 pi dM
//   carry term:  dM / T_H
//
// and the hole entropy by dS = dM / T_H. Each observer may read only one of
// the two information terms; reading one destroys access to the other.
// All first-order quantities are evaluated at the pre-event mass.

#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "ngsl/error.hpp"
#include "ngsl/schwarzschild.hpp"

namespace ngsl {

enum class Direction { infall, emission };

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::infall ? "infall" : "emission";
}

struct TransitEvent {
  double time = 0.0;
  double particle_mass = 0.0;
  Direction direction = Direction::infall;

  /// +m_a for infall, -m_a for emission.
  [[nodiscard]] double mass_change() const noexcept {
    return direction == Direction::infall ? particle_mass : -particle_mass;
  }
};

enum class LedgerMode { differential, exact };
enum class Channel { sense, carry };
enum class ChannelState { unread, sense_read, carry_read };

constexpr std::string_view to_string(LedgerMode m) noexcept {
  return m == LedgerMode::differential ? "differential" : "exact";
}
constexpr std::string_view to_string(Channel c) noexcept {
  return c == Channel::sense ? "sense" : "carry";
}
constexpr std::string_view to_string(ChannelState s) noexcept {
  switch (s) {
    case ChannelState::unread: return "unread";
    case ChannelState::sense_read: return "sense_read";
    case ChannelState::carry_read: return "carry_read";
  }
  return "unknown";
}

namespace detail {
// Shared expression shape for the three first-order terms so that they agree
// bit for bit.
inline double first_order_term(double mass, double dM) noexcept { return eight_pi * mass * dM; }
}  // namespace detail

inline double info_sense_term(const BlackHole& bh, double dM) noexcept {
  return detail::first_order_term(bh.mass(), dM);
}

inline double info_carry_term(const BlackHole& bh, double dM) noexcept {
  return detail::first_order_term(bh.mass(), dM);
}

/// Second-order gap between the exact area-law change and the first-order terms.
inline double discretization_residual(double dM) noexcept { return four_pi * dM * dM; }

inline double bh_entropy_change(const BlackHole& bh, double dM, LedgerMode mode) {
  if (mode == LedgerMode::differential) return detail::first_order_term(bh.mass(), dM);
  if (!(bh.mass() + dM > 0.0)) {
    throw Error(Errc::evaporated_past_zero,
                "exact entropy change undefined for final mass " + std::to_string(bh.mass() + dM));
  }
  // 4 pi [(M + dM)^2 - M^2], expanded to avoid cancellation.
  return detail::first_order_term(bh.mass(), dM) + discretization_residual(dM);
}

/// Both information terms, as kept in the ledger's own books. Observers go
/// through observe_channel instead.
struct LedgerAudit {
  double dI_sense;
  double dI_carry;
};

class LedgerEntry {
 public:
  [[nodiscard]] double pre_mass() const noexcept { return pre_mass_; }
  [[nodiscard]] double mass_change() const noexcept { return dM_; }
  [[nodiscard]] double entropy_change() const noexcept { return dS_bh_; }
  [[nodiscard]] LedgerMode mode() const noexcept { return mode_; }
  [[nodiscard]] double discretization_residual() const noexcept { return residual_; }
  [[nodiscard]] ChannelState channel_state() const noexcept { return state_; }
  [[nodiscard]] LedgerAudit audit() const noexcept { return {dI_sense_, dI_carry_}; }

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;

 private:
  friend LedgerEntry make_ledger_entry(const BlackHole&, double, LedgerMode);
  friend double ngsl_balance(const LedgerEntry&, Channel);
  friend std::pair<double, LedgerEntry> observe_channel(const LedgerEntry&, Channel);

  double pre_mass_ = 0.0;
  double dM_ = 0.0;
  double dI_sense_ = 0.0;
  double dI_carry_ = 0.0;
  double dS_first_order_ = 0.0;
  double dS_bh_ = 0.0;
  double residual_ = 0.0;
  LedgerMode mode_ = LedgerMode::differential;
  ChannelState state_ = ChannelState::unread;
};

inline LedgerEntry make_ledger_entry(const BlackHole& bh, double dM, LedgerMode mode) {
  LedgerEntry e;
  e.pre_mass_ = bh.mass();
  e.dM_ = dM;
  e.mode_ = mode;
  e.dI_sense_ = info_sense_term(bh, dM);
  e.dI_carry_ = info_carry_term(bh, dM);
  e.dS_first_order_ = bh_entropy_change(bh, dM, LedgerMode::differential);
  e.dS_bh_ = bh_entropy_change(bh, dM, mode);
  e.residual_ = mode == LedgerMode::exact ? discretization_residual(dM) : 0.0;
  return e;
}

struct AppliedEvent {
  BlackHole hole;
  LedgerEntry entry;
};

/// Moves the hole across one transit. `mass_floor` bounds emissions from below.
inline AppliedEvent apply_event(const BlackHole& bh, const TransitEvent& ev, LedgerMode mode,
                                double mass_floor = 0.0) {
  if (!(ev.particle_mass > 0.0) || !std::isfinite(ev.particle_mass)) {
    throw Error(Errc::invalid_mass,
                "particle mass must be positive, got " + std::to_string(ev.particle_mass));
  }
  const double dM = ev.mass_change();
  const double post = bh.mass() + dM;
  if (ev.direction == Direction::emission && (!(post >= mass_floor) || !(post > 0.0))) {
    throw Error(Errc::evaporated_past_floor, "emission of " + std::to_string(ev.particle_mass) +
                                                 " leaves mass " + std::to_string(post) +
                                                 " below floor " + std::to_string(mass_floor));
  }
  LedgerEntry entry = make_ledger_entry(bh, dM, mode);
  return {BlackHole(post), entry};
}

/// dS_bh - dI for the chosen channel. Zero in differential mode; the
/// positive residual 4 pi dM^2 in exact mode.
inline double ngsl_balance(const LedgerEntry& entry, Channel channel) {
  const double dI = channel == Channel::sense ? entry.dI_sense_ : entry.dI_carry_;
  return (entry.dS_first_order_ - dI) + entry.residual_;
}

/// Reads one information channel. Once a channel has been read the other is
/// no longer available from this entry.
inline std::pair<double, LedgerEntry> observe_channel(const LedgerEntry& entry, Channel channel) {
  const ChannelState wanted =
      channel == Channel::sense ? ChannelState::sense_read : ChannelState::carry_read;
  if (entry.state_ != ChannelState::unread && entry.state_ != wanted) {
    throw Error(Errc::complementarity_violation,
                "channel " + std::string(to_string(channel)) + " requested after " +
                    std::string(to_string(entry.state_)));
  }
  LedgerEntry next = entry;
  next.state_ = wanted;
  return {channel == Channel::sense ? entry.dI_sense_ : entry.dI_carry_, next};
}

}  // namespace ngsl

#endif  // NGSL_LEDGER_HPP
