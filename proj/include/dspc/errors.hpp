#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dspc {

// Bad arguments to a library call (invalid interval, mismatched sizes, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public std::runtime_error {
 public:
  explicit UnknownIdentifier(std::string name)
      : std::runtime_error("unknown identifier '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// A real operation was applied outside its domain (log of a negative, 0^-1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Dempster combination of two structures with no overlapping focal elements.
class TotalConflict : public std::runtime_error {
 public:
  TotalConflict() : std::runtime_error("total conflict: no focal elements intersect (K = 1)") {}
};

class DegenerateBox : public std::invalid_argument {
 public:
  explicit DegenerateBox(std::size_t dimension)
      : std::invalid_argument("degenerate box: component " + std::to_string(dimension) +
                              " has zero width"),
        dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

// Failure while propagating one product box; carries the box number.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(std::size_t box_id, const std::string& what)
      : std::runtime_error("box " + std::to_string(box_id) + ": " + what), box_id_(box_id) {}

  std::size_t box_id() const noexcept { return box_id_; }

 private:
  std::size_t box_id_;
};

}  // namespace dspc
