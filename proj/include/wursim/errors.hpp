#pragma once

#include <stdexcept>
#include <string>

namespace wursim {

/// Invalid or inconsistent configuration; raised before any simulation work starts.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A waveform carrying the wrong physical unit for the stage it was fed to.
class UnitError : public std::invalid_argument {
public:
    explicit UnitError(const std::string& what) : std::invalid_argument(what) {}
};

/// Decoder events delivered out of time order.
class ProtocolError : public std::logic_error {
public:
    explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace wursim
