#pragma once

#include <stdexcept>
#include <string>

namespace mset {

// Base for every domain error raised by the library. The CLI maps these to
// exit code 2 (bad input data) and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidPriority : public Error {
 public:
  using Error::Error;
};

class EmptyPopulation : public Error {
 public:
  using Error::Error;
};

class BatteryInfeasible : public Error {
 public:
  BatteryInfeasible(int agent, const std::string& what)
      : Error("agent " + std::to_string(agent) + ": " + what), agent_id(agent) {}
  int agent_id;
};

class CoincidentPositions : public Error {
 public:
  using Error::Error;
};

class UnresolvedSchedule : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mset
