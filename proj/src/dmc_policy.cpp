#include "mcb/dmc_policy.hpp"

#include "mcb/errors.hpp"

namespace mcb {
namespace {

std::variant<LateEntryPolicy, McPolicy> initial_inner(std::size_t k, std::uint64_t t0,
                                                      std::uint64_t t1, std::uint64_t entry) {
  if (entry % t1 == 0) return McPolicy(k, t0, t1);
  return LateEntryPolicy(k);
}

}  // namespace

DmcPolicy::DmcPolicy(std::size_t k, std::uint64_t t0, std::uint64_t t1,
                     std::uint64_t entry_global_t)
    : k_(k),
      t0_(t0),
      t1_(t1 > t0 ? t1 : throw ConfigError("DMC needs T1 > T0")),
      epoch_(entry_global_t / t1),
      inner_(initial_inner(k, t0, t1, entry_global_t)) {}

PolicyAction DmcPolicy::act(std::uint64_t global_t, Rng& rng) {
  if (pending_) throw ContractViolation("DMC: act() called before feedback for the last pull");
  const std::uint64_t epoch = global_t / t1_;
  if (epoch != epoch_) {
    epoch_ = epoch;
    inner_ = McPolicy(k_, t0_, t1_);
  }
  PolicyAction a = std::visit([&](auto& p) { return p.act(global_t, rng); }, inner_);
  pending_ = a.arm.has_value();
  return a;
}

void DmcPolicy::observe(const Feedback& feedback) {
  std::visit([&](auto& p) { p.observe(feedback); }, inner_);
  pending_ = false;
}

PolicyStatus DmcPolicy::status() const {
  PolicyStatus s = std::visit([](const auto& p) { return p.status(); }, inner_);
  s.epoch = epoch_;
  return s;
}

}  // namespace mcb
