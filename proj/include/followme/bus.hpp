#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "followme/errors.hpp"
#include "followme/world.hpp"

namespace followme {

namespace topics {
inline constexpr const char* distance_samples = "distance_samples";
}

namespace services {
inline constexpr const char* try_gesture = "try_gesture";
inline constexpr const char* face_id = "face_id";
inline constexpr const char* tracker_enable = "tracker_enable";
inline constexpr const char* home_base = "home_base";
}

enum class DeliveryKind { Topic, Response, Timeout, NotFound };

template <typename Payload>
struct Delivery
{
  DeliveryKind kind{DeliveryKind::Topic};
  std::uint64_t sequence{0};
  Tick sent_tick{0};
  Tick deliver_tick{0};
  std::string name;             // topic or service
  std::uint64_t request_id{0};  // 0 for topic messages
  Payload payload{};
};

struct ServiceCallRecord
{
  std::uint64_t request_id{0};
  std::string service;
  Tick issued_tick{0};
  Tick timeout_ticks{0};
  std::optional<DeliveryKind> outcome;  // set once the call resolves
};

/**
 * Tick-phased, single-threaded message transport.
 *
 * Topics are lossless and in-order. Service handlers run when their response
 * becomes due, so they observe the world as of the delivery tick. All pending
 * items are released by tick_deliver() in (deliver_tick, sequence) order.
 */
template <typename Payload>
class Bus
{
public:
  using Handler = std::function<Payload(const Payload& request)>;

  void declare_topic(const std::string& name)
  {
    if (!topics_.insert(name).second) {
      throw ConfigError(name, "topic already declared");
    }
  }

  void register_service(const std::string& name, Handler handler, Tick latency_ticks)
  {
    if (latency_ticks < 0) {
      throw ConfigError(name, "service latency must be >= 0");
    }
    if (!services_.emplace(name, Service{std::move(handler), latency_ticks}).second) {
      throw ConfigError(name, "service already registered");
    }
  }

  bool has_service(const std::string& name) const { return services_.count(name) != 0; }

  void publish(const std::string& topic, Payload payload, Tick now, Tick latency_ticks = 0)
  {
    if (!topics_.count(topic)) {
      throw ProtocolError("publish to undeclared topic '" + topic + "'");
    }
    check_clock(now);
    enqueue(Pending{DeliveryKind::Topic, now, now + latency_ticks, topic, 0, std::move(payload)});
  }

  /// Issues a request and returns its id. The single outcome (Response,
  /// Timeout or NotFound) arrives through tick_deliver().
  std::uint64_t call_service(const std::string& name, Payload request, Tick now, Tick timeout_ticks)
  {
    check_clock(now);
    const std::uint64_t id = next_request_id_++;
    call_log_.push_back(ServiceCallRecord{id, name, now, timeout_ticks, std::nullopt});

    const auto it = services_.find(name);
    if (it == services_.end()) {
      enqueue(Pending{DeliveryKind::NotFound, now, now, name, id, std::move(request)});
    } else if (it->second.latency > timeout_ticks) {
      enqueue(Pending{DeliveryKind::Timeout, now, now + timeout_ticks, name, id, Payload{}});
    } else {
      enqueue(Pending{DeliveryKind::Response, now, now + it->second.latency, name, id,
                      std::move(request)});
    }
    return id;
  }

  /// Releases everything due at or before `now`. A repeated call for the same
  /// tick returns nothing; items queued after the first call wait for the next tick.
  std::vector<Delivery<Payload>> tick_deliver(Tick now)
  {
    check_clock(now);
    std::vector<Delivery<Payload>> out;
    if (last_delivered_ && *last_delivered_ == now) {
      return out;
    }
    last_delivered_ = now;

    while (!queue_.empty() && queue_.begin()->first.first <= now) {
      auto node = queue_.extract(queue_.begin());
      Pending& item = node.mapped();
      Delivery<Payload> d;
      d.kind = item.kind;
      d.sequence = node.key().second;
      d.sent_tick = item.sent_tick;
      d.deliver_tick = item.deliver_tick;
      d.name = item.name;
      d.request_id = item.request_id;
      if (item.kind == DeliveryKind::Response) {
        d.payload = services_.at(item.name).handler(item.payload);
      } else if (item.kind != DeliveryKind::Timeout) {
        d.payload = std::move(item.payload);
      }
      if (d.request_id != 0) {
        call_log_[d.request_id - 1].outcome = d.kind;
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  const std::vector<ServiceCallRecord>& call_log() const { return call_log_; }

  std::size_t calls_to(const std::string& service) const
  {
    std::size_t n = 0;
    for (const auto& rec : call_log_) {
      n += rec.service == service ? 1 : 0;
    }
    return n;
  }

  std::size_t pending() const { return queue_.size(); }

private:
  struct Service
  {
    Handler handler;
    Tick latency;
  };

  struct Pending
  {
    DeliveryKind kind;
    Tick sent_tick;
    Tick deliver_tick;
    std::string name;
    std::uint64_t request_id;
    Payload payload;
  };

  void check_clock(Tick now)
  {
    if (now < clock_) {
      throw ProtocolError("bus clock moved backwards");
    }
    clock_ = now;
  }

  void enqueue(Pending item)
  {
    const std::uint64_t seq = next_sequence_++;
    queue_.emplace(std::make_pair(item.deliver_tick, seq), std::move(item));
  }

  std::set<std::string> topics_;
  std::map<std::string, Service> services_;
  std::map<std::pair<Tick, std::uint64_t>, Pending> queue_;
  std::vector<ServiceCallRecord> call_log_;
  std::uint64_t next_sequence_{1};
  std::uint64_t next_request_id_{1};
  Tick clock_{0};
  std::optional<Tick> last_delivered_;
};

}  // namespace followme
