#include "css/market.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>

#include "css/matcher.hpp"

namespace css {

std::string_view to_string(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::Exact: return "exact";
    case SelectionStrategy::Greedy: return "greedy";
    case SelectionStrategy::GreedyThenExact: return "greedy-then-exact";
  }
  return "exact";
}

std::vector<std::string> Award::offer_ids() const {
  std::vector<std::string> ids;
  for (const auto& o : selected) ids.push_back(o.offerId);
  return ids;
}

Admissibility evaluate_offer(const ServiceRequest& request, const ServiceOffer& offer,
                             const WorldModel& world) {
  if (offer.requestId != request.requestId) {
    throw Error(ErrorCode::InvalidArgument, "offer '" + offer.offerId + "' answers request '" +
                                                offer.requestId + "', not '" + request.requestId + "'");
  }
  Admissibility out;
  bool covered = !offer.coveredCapKeys.empty();
  for (const auto& key : offer.coveredCapKeys) {
    const RequiredCapability* required = request.find(key);
    if (!required) {
      throw Error(ErrorCode::UnknownCapKey,
                  "offer '" + offer.offerId + "' covers unknown capKey '" + key + "'");
    }
    auto provided = offer.providedCapabilities.find(key);
    if (provided == offer.providedCapabilities.end()) {
      covered = false;
      continue;
    }
    MatchDegree d = match_capabilities(required->expression, provided->second, world).degree;
    if (d != MatchDegree::Exact && d != MatchDegree::Plugin) covered = false;
  }
  const TenderCriteria& t = request.tender;
  if (!covered) out.violations.emplace_back("capabilityCoverage");
  if (offer.unitPrice > t.maxUnitPrice) out.violations.emplace_back("maxUnitPrice");
  if (offer.co2PerUnit > t.maxCo2PerUnit) out.violations.emplace_back("maxCo2PerUnit");
  if (offer.deliveryDate > t.deliveryDeadline) out.violations.emplace_back("deliveryDeadline");
  if (!std::includes(offer.certifications.begin(), offer.certifications.end(),
                     t.requiredCertifications.begin(), t.requiredCertifications.end())) {
    out.violations.emplace_back("certifications");
  }
  if (t.ndaRequired && !offer.ndaAccepted) out.violations.emplace_back("nda");
  out.admissible = out.violations.empty();
  return out;
}

namespace {

struct OfferCandidate {
  const ServiceOffer* offer;
  std::uint64_t mask = 0;
};

using Selection = std::vector<std::size_t>;

bool ids_less(const std::vector<OfferCandidate>& cands, const Selection& a, const Selection& b) {
  auto ids = [&](const Selection& s) {
    std::vector<std::string> out;
    for (auto i : s) out.push_back(cands[i].offer->offerId);
    std::sort(out.begin(), out.end());
    return out;
  };
  return ids(a) < ids(b);
}

bool group_taken(const std::vector<OfferCandidate>& cands, const Selection& chosen, const ServiceOffer& o) {
  if (!o.exclusiveGroup) return false;
  for (auto i : chosen) {
    if (cands[i].offer->exclusiveGroup == o.exclusiveGroup) return true;
  }
  return false;
}

class ExactSearch {
 public:
  ExactSearch(const std::vector<OfferCandidate>& cands, std::uint64_t full) : cands_(cands), full_(full) {}

  std::optional<Selection> run() {
    Selection chosen;
    dfs(0, Decimal(), chosen);
    return best_;
  }

 private:
  void dfs(std::uint64_t covered, Decimal cost, Selection& chosen) {
    if (best_ && cost > best_cost_) return;
    if (covered == full_) {
      if (!best_ || cost < best_cost_ || ids_less(cands_, chosen, *best_)) {
        best_ = chosen;
        best_cost_ = cost;
      }
      return;
    }
    // Branch on the lowest uncovered key; every cover must include exactly
    // one offer containing it.
    std::uint64_t key = (~covered & full_) & -(~covered & full_);
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      const OfferCandidate& c = cands_[i];
      if (!(c.mask & key) || (c.mask & covered)) continue;
      if (group_taken(cands_, chosen, *c.offer)) continue;
      chosen.push_back(i);
      dfs(covered | c.mask, cost + c.offer->unitPrice, chosen);
      chosen.pop_back();
    }
  }

  const std::vector<OfferCandidate>& cands_;
  std::uint64_t full_;
  std::optional<Selection> best_;
  Decimal best_cost_;
};

std::optional<Selection> greedy(const std::vector<OfferCandidate>& cands, std::uint64_t full) {
  Selection chosen;
  std::uint64_t covered = 0;
  while (covered != full) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const OfferCandidate& c = cands[i];
      if (c.mask & covered) continue;
      if (group_taken(cands, chosen, *c.offer)) continue;
      if (!pick) {
        pick = i;
        continue;
      }
      const OfferCandidate& p = cands[*pick];
      // price/newKeys compared by cross-multiplication
      auto lhs = c.offer->unitPrice.mul_int(std::popcount(p.mask));
      auto rhs = p.offer->unitPrice.mul_int(std::popcount(c.mask));
      if (lhs < rhs || (lhs == rhs && c.offer->offerId < p.offer->offerId)) pick = i;
    }
    if (!pick) return std::nullopt;
    chosen.push_back(*pick);
    covered |= cands[*pick].mask;
  }
  return chosen;
}

}  // namespace

Award select_offers(const ServiceRequest& request, const std::vector<ServiceOffer>& offers,
                    Timestamp now, const WorldModel& world) {
  if (request.requiredCapabilities.size() > 63) {
    throw Error(ErrorCode::InvalidArgument, "too many capKeys in request '" + request.requestId + "'");
  }
  std::map<std::string, std::uint64_t> bit;
  for (std::size_t i = 0; i < request.requiredCapabilities.size(); ++i) {
    bit.emplace(request.requiredCapabilities[i].capKey, std::uint64_t{1} << i);
  }
  const std::uint64_t full = (std::uint64_t{1} << request.requiredCapabilities.size()) - 1;

  std::vector<const ServiceOffer*> sorted;
  for (const auto& o : offers) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->offerId < b->offerId; });

  std::vector<OfferCandidate> cands;
  for (const ServiceOffer* o : sorted) {
    if (o->requestId != request.requestId || o->validUntil < now) continue;
    if (!evaluate_offer(request, *o, world).admissible) continue;
    OfferCandidate c{o, 0};
    bool repeated = false;
    for (const auto& key : o->coveredCapKeys) {
      repeated |= (c.mask & bit.at(key)) != 0;
      c.mask |= bit.at(key);
    }
    if (!repeated) cands.push_back(c);
  }

  Award award;
  award.requestId = request.requestId;
  std::optional<Selection> chosen;
  if (full == 0) {
    chosen = Selection{};
  } else if (cands.size() <= kExactSearchLimit) {
    chosen = ExactSearch(cands, full).run();
  } else {
    award.strategy = SelectionStrategy::Greedy;
    chosen = greedy(cands, full);
    if (!chosen) {
      award.strategy = SelectionStrategy::GreedyThenExact;
      chosen = ExactSearch(cands, full).run();
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::NoFeasibleCombination,
                "no admissible offer combination covers request '" + request.requestId + "'");
  }
  Decimal sum;
  for (auto i : *chosen) {
    award.selected.push_back(*cands[i].offer);
    sum += cands[i].offer->unitPrice;
  }
  std::sort(award.selected.begin(), award.selected.end(),
            [](const auto& a, const auto& b) { return a.offerId < b.offerId; });
  award.totalCost = sum.mul_int(request.tender.quantity);
  return award;
}

Contract form_contract(const Award& award, Timestamp acceptedAt) {
  if (award.selected.empty()) throw Error(ErrorCode::InvalidArgument, "award selects no offers");
  for (const auto& o : award.selected) {
    if (acceptedAt > o.validUntil) {
      throw Error(ErrorCode::OfferExpired,
                  "offer '" + o.offerId + "' expired at " + o.validUntil.to_string());
    }
  }
  return {"ct-" + award.requestId, award.requestId, award.offer_ids(), award.totalCost, acceptedAt};
}

void Marketplace::submit_request(ServiceRequest request) {
  std::lock_guard lock(mutex_);
  std::string id = request.requestId;
  if (!requests_.emplace(id, std::move(request)).second) {
    throw Error(ErrorCode::InvalidArgument, "duplicate request '" + id + "'");
  }
}

void Marketplace::submit_offer(ServiceOffer offer) {
  std::lock_guard lock(mutex_);
  auto req = requests_.find(offer.requestId);
  if (req == requests_.end()) throw Error(ErrorCode::NotFound, "no request '" + offer.requestId + "'");
  for (const auto& key : offer.coveredCapKeys) {
    if (!req->second.find(key)) {
      throw Error(ErrorCode::UnknownCapKey, "offer '" + offer.offerId + "' covers unknown capKey '" + key + "'");
    }
  }
  auto& list = offers_[offer.requestId];
  for (const auto& o : list) {
    if (o.offerId == offer.offerId) throw Error(ErrorCode::InvalidArgument, "duplicate offer '" + o.offerId + "'");
  }
  list.push_back(std::move(offer));
}

std::vector<ServiceRequest> Marketplace::requests() const {
  std::lock_guard lock(mutex_);
  std::vector<ServiceRequest> out;
  for (const auto& [id, r] : requests_) out.push_back(r);
  return out;
}

std::vector<ServiceOffer> Marketplace::offers_for(const std::string& requestId) const {
  std::lock_guard lock(mutex_);
  auto it = offers_.find(requestId);
  return it == offers_.end() ? std::vector<ServiceOffer>{} : it->second;
}

Award Marketplace::award(const std::string& requestId, Timestamp now) const {
  std::lock_guard lock(mutex_);
  auto req = requests_.find(requestId);
  if (req == requests_.end()) throw Error(ErrorCode::NotFound, "no request '" + requestId + "'");
  auto it = offers_.find(requestId);
  static const std::vector<ServiceOffer> none;
  return select_offers(req->second, it == offers_.end() ? none : it->second, now, world_);
}

}  // namespace css
