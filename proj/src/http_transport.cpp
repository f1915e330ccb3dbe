#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "triage/miner.hpp"

namespace triage {
namespace {

class LiveTransport : public Transport {
 public:
  explicit LiveTransport(const std::string& base_url) : client_(base_url) {
    client_.set_connection_timeout(10);
    client_.set_read_timeout(30);
    client_.set_follow_location(true);
  }

  HttpResponse get(const std::string& target,
                   const std::map<std::string, std::string>& headers) override {
    httplib::Headers h(headers.begin(), headers.end());
    auto res = client_.Get(target, h);
    HttpResponse out;
    if (!res) return out;  // status 0: connection-level failure, retried upstream
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) {
      std::string name = k;
      for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.headers[name] = v;
    }
    return out;
  }

 private:
  httplib::Client client_;
};

}  // namespace

std::unique_ptr<Transport> make_live_transport(const std::string& base_url) {
  return std::make_unique<LiveTransport>(base_url);
}

}  // namespace triage
