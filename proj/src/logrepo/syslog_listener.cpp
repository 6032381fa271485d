#include "ndntb/logrepo/syslog_listener.hpp"

namespace ndntb::logrepo {

SyslogListener::SyslogListener(LogStore& store, const std::string& address, std::uint16_t port)
    : store_(store), socket_(UdpSocket::bind(address, port)), port_(socket_.local_port()) {
  thread_ = std::thread([this] { run(); });
}

SyslogListener::~SyslogListener() { stop(); }

void SyslogListener::stop() {
  stopping_ = true;
  if (thread_.joinable()) thread_.join();
}

void SyslogListener::run() {
  while (!stopping_) {
    auto dgram = socket_.receive(std::chrono::milliseconds(50));
    if (!dgram) continue;
    const std::string_view line(reinterpret_cast<const char*>(dgram->bytes.data()), dgram->bytes.size());
    // Logs are attributed to the sender's IP, not its port.
    const std::string source = dgram->source.substr(0, dgram->source.rfind(':'));
    store_.ingest_line(line, source, wall_clock_now());
    ++datagrams_;
  }
}

}  // namespace ndntb::logrepo
