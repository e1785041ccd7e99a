#pragma once

#include <cmath>
#include <stdexcept>

namespace wsafcm {

/// First-order radio model constants. Defaults are the usual WSN
/// simulation values (50 nJ/bit electronics, 10 pJ/bit/m^2 free-space
/// amplifier, 0.0013 pJ/bit/m^4 multipath amplifier, 5 nJ/bit/signal
/// aggregation, 4096-bit packets).
template <typename Scalar>
struct RadioParams {
  Scalar e_elec = Scalar(50e-9);      // J/bit, TX/RX electronics
  Scalar eps_fs = Scalar(10e-12);     // J/bit/m^2, free-space amplifier
  Scalar eps_mp = Scalar(0.0013e-12); // J/bit/m^4, multipath amplifier
  Scalar e_da = Scalar(5e-9);         // J/bit/signal, aggregation
  Scalar packet_bits = Scalar(4096);  // bits per data packet

  bool valid() const {
    return e_elec > Scalar(0) && eps_fs > Scalar(0) && eps_mp > Scalar(0) &&
           e_da > Scalar(0) && packet_bits > Scalar(0) &&
           std::isfinite(eps_fs / eps_mp);
  }
};

using RadioParamsd = RadioParams<double>;

/// Crossover distance between the d^2 and d^4 amplifier regimes.
template <typename Scalar>
Scalar threshold_distance(const RadioParams<Scalar>& p) {
  return std::sqrt(p.eps_fs / p.eps_mp);
}

/// Energy to transmit `bits` over `distance` metres. Free-space amplifier
/// below the threshold distance, multipath at or above it; both branches
/// agree exactly at the threshold.
template <typename Scalar>
Scalar tx_energy(const RadioParams<Scalar>& p, Scalar bits, Scalar distance) {
  if (bits < Scalar(0)) throw std::invalid_argument("tx_energy: negative bits");
  if (distance < Scalar(0)) throw std::invalid_argument("tx_energy: negative distance");
  const Scalar d2 = distance * distance;
  if (distance < threshold_distance(p)) {
    return bits * p.e_elec + bits * p.eps_fs * d2;
  }
  return bits * p.e_elec + bits * p.eps_mp * d2 * d2;
}

/// Energy to receive `bits`: electronics only.
template <typename Scalar>
Scalar rx_energy(const RadioParams<Scalar>& p, Scalar bits) {
  if (bits < Scalar(0)) throw std::invalid_argument("rx_energy: negative bits");
  return bits * p.e_elec;
}

/// Energy to aggregate `signals` packets of `bits` each.
template <typename Scalar>
Scalar aggregation_energy(const RadioParams<Scalar>& p, Scalar bits, Scalar signals) {
  if (bits < Scalar(0)) throw std::invalid_argument("aggregation_energy: negative bits");
  if (signals < Scalar(0)) throw std::invalid_argument("aggregation_energy: negative signals");
  return bits * p.e_da * signals;
}

}  // namespace wsafcm
