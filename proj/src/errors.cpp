#include "fpp/errors.hpp"

namespace fpp {

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::size_t line, std::size_t column)
    : Error("parse error at " + std::to_string(line) + ":" +
            std::to_string(column) + ": " + message),
      offset_(offset),
      line_(line),
      column_(column) {}

CosetLimitExceeded::CosetLimitExceeded(std::size_t cosets_defined,
                                       std::size_t limit)
    : Error("coset enumeration exceeded the limit of " + std::to_string(limit) +
            " cosets (" + std::to_string(cosets_defined) +
            " defined); the group may be infinite or the cap too small"),
      cosets_defined_(cosets_defined),
      limit_(limit) {}

OrderTooLarge::OrderTooLarge(std::size_t order, std::size_t cap)
    : Error("group order " + std::to_string(order) +
            " exceeds the oracle cap of " + std::to_string(cap)) {}

}  // namespace fpp
