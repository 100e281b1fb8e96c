#pragma once

#include <stdexcept>
#include <string>

namespace jclcd {

// Base of every error raised by the library. Physics and numerical failures
// derive from it directly; configuration problems derive from ConfigError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// chi_k == 0: the doublet of mode k has no well-defined eigenvectors.
class DegenerateModeError : public Error {
public:
    using Error::Error;
};

// Two coupled eigenstates have (numerically) equal energies in the spectral sum.
class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// A quantity that must lie in a closed range is outside it by more than the
// rounding slack (e.g. a fidelity of 1.01).
class NumericalIntegrityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace jclcd
