#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "css/model.hpp"

namespace css {

struct Admissibility {
  bool admissible = true;
  /// Failed criteria in a fixed order: capabilityCoverage, maxUnitPrice,
  /// maxCo2PerUnit, deliveryDeadline, certifications, nda.
  std::vector<std::string> violations;

  friend bool operator==(const Admissibility&, const Admissibility&) = default;
};

/// Throws InvalidArgument when the offer targets another request and
/// UnknownCapKey for covered keys the request does not define.
Admissibility evaluate_offer(const ServiceRequest& request, const ServiceOffer& offer,
                             const WorldModel& world);

enum class SelectionStrategy { Exact, Greedy, GreedyThenExact };

std::string_view to_string(SelectionStrategy strategy);

inline constexpr std::string_view kQuantityAssumption = "full-quantity-per-offer";
inline constexpr std::size_t kExactSearchLimit = 20;

struct Award {
  std::string requestId;
  /// Sorted by offerId.
  std::vector<ServiceOffer> selected;
  Decimal totalCost;
  SelectionStrategy strategy = SelectionStrategy::Exact;
  std::string quantityAssumption{kQuantityAssumption};

  std::vector<std::string> offer_ids() const;
};

/// Cheapest combination of admissible, unexpired offers covering every
/// capKey exactly once with at most one offer per exclusive group. Equal
/// costs resolve to the lexicographically smallest sorted offerId list.
/// Throws NoFeasibleCombination.
Award select_offers(const ServiceRequest& request, const std::vector<ServiceOffer>& offers,
                    Timestamp now, const WorldModel& world);

/// Throws InvalidArgument for an empty award and OfferExpired when
/// acceptedAt is past any selected offer's validUntil.
Contract form_contract(const Award& award, Timestamp acceptedAt);

/// In-memory registry of open requests and their offers.
class Marketplace {
 public:
  explicit Marketplace(WorldModel world) : world_(std::move(world)) {}

  /// Throws InvalidArgument on a duplicate requestId.
  void submit_request(ServiceRequest request);
  /// Throws NotFound for an unknown request, InvalidArgument on a duplicate
  /// offerId, UnknownCapKey for keys outside the request.
  void submit_offer(ServiceOffer offer);

  std::vector<ServiceRequest> requests() const;
  std::vector<ServiceOffer> offers_for(const std::string& requestId) const;

  Award award(const std::string& requestId, Timestamp now) const;

 private:
  WorldModel world_;
  mutable std::mutex mutex_;
  std::map<std::string, ServiceRequest> requests_;
  std::map<std::string, std::vector<ServiceOffer>> offers_;
};

}  // namespace css
