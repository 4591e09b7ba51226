#ifndef FLAB_ERROR_HPP
#define FLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace flab {

enum class Errc {
  cycle,
  top,
  size_cap,
  parse,
  dangling_name,
  non_transitive_x,
  non_transitive_t,
  unknown_condition,
  param,
  no_mutation_found,
  incompatible_assignments,
  x_mismatch,
  not_generic,
  start_not_in_sigma,
  usage,
};

// Stable machine-readable code names; the CLI prints them as the first
// token on stderr.
inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::cycle: return "CycleError";
    case Errc::top: return "TopError";
    case Errc::size_cap: return "SizeCapExceeded";
    case Errc::parse: return "ParseError";
    case Errc::dangling_name: return "DanglingName";
    case Errc::non_transitive_x: return "NonTransitiveX";
    case Errc::non_transitive_t: return "NonTransitiveT";
    case Errc::unknown_condition: return "UnknownCondition";
    case Errc::param: return "ParamError";
    case Errc::no_mutation_found: return "NoMutationFound";
    case Errc::incompatible_assignments: return "IncompatibleAssignments";
    case Errc::x_mismatch: return "XMismatch";
    case Errc::not_generic: return "NotGeneric";
    case Errc::start_not_in_sigma: return "StartNotInSigma";
    case Errc::usage: return "UsageError";
  }
  return "UnknownError";
}

class LabError : public std::runtime_error {
 public:
  LabError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace flab

#endif
