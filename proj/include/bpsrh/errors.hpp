#pragma once

#include <stdexcept>
#include <string>

namespace bpsrh {

// Every failure mode the library reports. Callers can switch on the code;
// the what() string carries the offending values.
enum class Errc {
  asymmetric_form,
  symmetry_violation,
  zero_central_charge,
  out_of_range,
  pole_at,
  branch_cut,
  pole_at_one,
  nonconvergent_input,
  pole_on_divisor,
  not_generic,
  not_integral,
  flow_diverged,
  domain_violation,
  class_outside_cone,
  cone_mismatch,
  boundary_active,
  not_factorizable,
  active_ray,
  outside_half_plane,
  not_uncoupled,
  degenerate_form,
  parse_error,
  schema_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what_arg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what_arg),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace bpsrh
