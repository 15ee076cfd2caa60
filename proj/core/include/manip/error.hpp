#pragma once

#include <stdexcept>
#include <string>

namespace manip {

// Integration produced a non-finite coordinate. Usually means the PD gains or
// contact stiffness are too high for the control substep.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(const std::string& what, int coordinate)
      : std::runtime_error(what), coordinate_(coordinate) {}
  int coordinate() const { return coordinate_; }

 private:
  int coordinate_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace manip
