#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ungar {

/// Root of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed permutations, invalid parameters, bad files.
class invalid_input : public error {
 public:
  using error::error;
};

class domain_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class cycle_detected : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class redundant_cover : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class invalid_selection : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class size_mismatch : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class not_312_avoiding : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class not_a_lattice : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class not_reached : public error {
 public:
  using error::error;
};

class series_truncation_error : public error {
 public:
  using error::error;
};

/// An enumeration guard tripped. Carries the cap so callers can report it.
class cap_exceeded : public error {
 public:
  cap_exceeded(const std::string& what, std::size_t cap) : error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class state_explosion : public cap_exceeded {
 public:
  using cap_exceeded::cap_exceeded;
};

class chain_explosion : public cap_exceeded {
 public:
  using cap_exceeded::cap_exceeded;
};

/// Something that must hold by construction did not. Always a bug.
class invariant_violation : public error {
 public:
  using error::error;
};

class coupling_violation : public invariant_violation {
 public:
  using invariant_violation::invariant_violation;
};

class bound_violation : public invariant_violation {
 public:
  using invariant_violation::invariant_violation;
};

class singular_system : public invariant_violation {
 public:
  using invariant_violation::invariant_violation;
};

}  // namespace ungar
