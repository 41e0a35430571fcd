#pragma once

#include <stdexcept>
#include <string>

namespace soundscape {

// Library-wide error taxonomy. Every type here maps onto exactly one
// ss_status code at the C boundary (see include/soundscape/soundscape.h).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File missing or unreadable.
struct IoError : Error {
  using Error::Error;
};

// Corrupt or truncated RIFF/WAVE container.
struct DecodeError : Error {
  using Error::Error;
};

// Multichannel input; no silent downmix.
struct ChannelError : Error {
  using Error::Error;
};

// Unsupported encoding (non-16-bit PCM) or sample rate below 22050 Hz.
struct FormatError : Error {
  using Error::Error;
};

// All-zero signal or zero band power; downstream normalization undefined.
struct SilentRecordingError : Error {
  using Error::Error;
};

// Analysis window longer than the signal.
struct WindowError : Error {
  using Error::Error;
};

// Spectrogram with fewer than two time frames.
struct InsufficientFramesError : Error {
  using Error::Error;
};

// Index value on or outside the transform bounds.
struct BoundaryError : Error {
  using Error::Error;
};

// Two metadata rows with the same (site, date, time, year).
struct DuplicateRecordingError : Error {
  using Error::Error;
};

// Recording year outside the configured study span.
struct YearRangeError : Error {
  using Error::Error;
};

// Recorded year without a full set of index values.
struct MissingResponseError : Error {
  using Error::Error;
};

// Covariance matrix not positive definite.
struct CovarianceError : Error {
  using Error::Error;
};

// Failed factorization or non-finite intermediate.
struct NumericalError : Error {
  using Error::Error;
};

// Non-finite log-likelihood during sampling; carries the iteration index.
struct ChainDivergenceError : NumericalError {
  ChainDivergenceError(const std::string& what, long iter)
      : NumericalError(what + " (iteration " + std::to_string(iter) + ")"),
        iteration(iter) {}
  long iteration;
};

// Fewer retained draws than a summary requires.
struct InsufficientDrawsError : Error {
  using Error::Error;
};

// Invalid configuration, arguments, or file schema.
struct ConfigError : Error {
  using Error::Error;
};

// Model reports built from different datasets cannot be compared.
struct DataMismatchError : Error {
  using Error::Error;
};

}  // namespace soundscape
