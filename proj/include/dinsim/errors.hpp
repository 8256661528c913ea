#pragma once

#include <stdexcept>
#include <string>

namespace dinsim {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// contracts
struct InvalidContract final : Error { using Error::Error; };
struct NotInDefault final : Error { using Error::Error; };
struct ZeroAllocation final : Error { using Error::Error; };

// lifecycle
struct WrongEventKind final : Error { using Error::Error; };
struct CaseClosed final : Error { using Error::Error; };
struct UnbalancedEvent final : Error { using Error::Error; };
struct InsufficientCash final : Error { using Error::Error; };
struct InvalidOffer final : Error { using Error::Error; };

// model
struct MocOutOfRange final : Error { using Error::Error; };
struct InvalidParams final : Error { using Error::Error; };
struct NonPositiveDenominator final : Error { using Error::Error; };

// calibrate
struct NotBracketed final : Error { using Error::Error; };
struct NotMonotone final : Error { using Error::Error; };
struct NoCrossing final : Error { using Error::Error; };
struct InfeasibleBounds final : Error { using Error::Error; };

// montecarlo
struct BadDistribution final : Error { using Error::Error; };
struct EmptyInput final : Error { using Error::Error; };

// cli
struct ConfigError final : Error { using Error::Error; };
struct IoError final : Error { using Error::Error; };

}  // namespace dinsim
