#include "tta/gm/server.hpp"

#include <atomic>
#include <deque>
#include <map>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "tta/gm/live.hpp"
#include "tta/util/log.hpp"

namespace tta::gm {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

std::vector<std::string> split_path(std::string_view target) {
  if (const auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    const auto j = target.find('/', i);
    const auto end = j == std::string_view::npos ? target.size() : j;
    if (end > i) parts.emplace_back(target.substr(i, end - i));
    i = end + 1;
  }
  return parts;
}

http::status status_for(const std::string& code) {
  if (code == "unknown_session") return http::status::not_found;
  if (code == "wrong_phase" || code == "empty_archive" || code == "no_selection") return http::status::conflict;
  if (code == "unloadable_agent") return http::status::internal_server_error;
  return http::status::bad_request;
}

Response json_response(const Request& req, http::status status, const std::string& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.keep_alive(req.keep_alive());
  res.body() = body;
  res.prepare_payload();
  return res;
}

Response error_response(const Request& req, http::status status, const std::string& code, const std::string& msg) {
  return json_response(req, status, nlohmann::json{{"code", code}, {"message", msg}}.dump());
}

nlohmann::json body_json(const Request& req) {
  if (req.body().empty()) return nlohmann::json::object();
  auto doc = nlohmann::json::parse(req.body());
  if (!doc.is_object()) throw GmError("bad_request", "request body must be a JSON object");
  return doc;
}

std::string string_field(const nlohmann::json& doc, const char* key, std::optional<std::string> fallback = {}) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    if (fallback) return *fallback;
    throw GmError("bad_request", std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) throw GmError("bad_request", std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

struct LiveMatch {
  std::shared_ptr<LiveController> controller;
  std::atomic<bool> done{false};
};

}  // namespace

struct Server::Impl {
  GameManager& gm;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  net::thread_pool workers;
  std::thread io_thread;
  std::atomic<bool> running{false};
  unsigned short port = 0;

  std::mutex mu;
  std::map<std::string, std::shared_ptr<LiveMatch>> live;
  std::vector<std::thread> match_threads;

  Impl(GameManager& g, ServerOptions o)
      : gm(g), options(std::move(o)), workers(static_cast<std::size_t>(std::max(1, options.worker_threads))) {}

  void do_accept();
  Response handle(const Request& req);
  std::shared_ptr<LiveMatch> live_match_for(const std::string& id);
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Server::Impl& srv) : ws_(std::move(socket)), srv_(srv) {}

  void run(Request req) {
    const auto parts = split_path(std::string_view(req.target().data(), req.target().size()));
    if (parts.size() == 3 && parts[0] == "session" && parts[2] == "stream") session_id_ = parts[1];
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(std::string text, bool final) {
    net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text), final]() mutable {
      self->queue_.push_back(std::move(text));
      self->close_after_ = self->close_after_ || final;
      if (self->queue_.size() == 1) self->do_write();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    try {
      if (session_id_.empty()) throw GmError("bad_request", "stream path must be /session/{id}/stream");
      match_ = srv_.live_match_for(session_id_);
    } catch (const GmError& e) {
      send(nlohmann::json{{"type", "error"}, {"code", e.code()}, {"message", e.what()}}.dump(), true);
      return;
    }
    std::weak_ptr<WsSession> weak = shared_from_this();
    token_ = match_->controller->attach([weak](const std::string& text, bool final) {
      if (auto self = weak.lock()) self->send(text, final);
    });
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      if (match_) match_->controller->detach(token_);
      return;
    }
    const auto doc = nlohmann::json::parse(beast::buffers_to_string(buffer_.data()), nullptr, false);
    buffer_.consume(buffer_.size());
    const auto bad = [&](const std::string& msg) {
      send(nlohmann::json{{"type", "error"}, {"code", "bad_message"}, {"message", msg}}.dump(), false);
    };
    if (!doc.is_object() || doc.value("type", "") != "input") {
      bad("expected {type:\"input\", bitmask, tick}");
    } else if (!doc.contains("bitmask") || !doc["bitmask"].is_number_integer() || doc["bitmask"].get<int>() < 0 ||
               doc["bitmask"].get<int>() > 4095) {
      bad("bitmask must be an integer in 0..4095");
    } else if (!doc.contains("tick") || !doc["tick"].is_number_integer() || doc["tick"].get<std::int64_t>() < 0) {
      bad("tick must be a non-negative integer");
    } else {
      match_->controller->push_input(static_cast<std::uint16_t>(doc["bitmask"].get<int>()),
                                     doc["tick"].get<std::int64_t>());
    }
    do_read();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      if (match_) match_->controller->detach(token_);
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) do_write();
    else if (close_after_) ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl& srv_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool close_after_ = false;
  std::string session_id_;
  std::shared_ptr<LiveMatch> match_;
  std::uint64_t token_ = 0;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Server::Impl& srv) : stream_(std::move(socket)), srv_(srv) {}

  void run() { net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this())); }

 private:
  void do_read() {
    req_ = {};
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      std::make_shared<WsSession>(stream_.release_socket(), srv_)->run(std::move(req_));
      return;
    }
    // Handlers may block (selection can take minutes); keep them off the IO thread.
    net::post(srv_.workers, [self = shared_from_this(), req = std::move(req_)] {
      auto res = std::make_shared<Response>(self->srv_.handle(req));
      net::post(self->stream_.get_executor(), [self, res] { self->write(res); });
    });
  }

  void write(std::shared_ptr<Response> res) {
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (res->need_eof()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  Server::Impl& srv_;
  beast::flat_buffer buffer_;
  Request req_;
};

}  // namespace

void Server::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(socket), *this)->run();
    do_accept();
  });
}

std::shared_ptr<LiveMatch> Server::Impl::live_match_for(const std::string& id) {
  std::lock_guard lock(mu);
  if (auto it = live.find(id); it != live.end() && !it->second->done) return it->second;
  const auto view = gm.session(id);
  if (view.phase != Phase::AwaitingSelection || !view.pending)
    throw GmError("no_selection", "session has no selected opponent waiting to be played");
  auto m = std::make_shared<LiveMatch>();
  auto roster = std::make_shared<env::Roster>(gm.roster());
  m->controller = std::make_shared<LiveController>(roster, options.tick_hz, options.disconnect_grace);
  live[id] = m;
  match_threads.emplace_back([this, id, m] {
    nlohmann::json result;
    try {
      const auto pm = gm.run_pending_match(id, *m->controller);
      result = {{"type", "result"},
                {"winner", to_string(pm.summary.winner)},
                {"score", pm.summary.score},
                {"forfeit", pm.forfeit}};
    } catch (const GmError& e) {
      result = {{"type", "error"}, {"code", e.code()}, {"message", e.what()}};
    } catch (const std::exception& e) {
      util::log_error("session " + id + ": live match failed: " + e.what());
      result = {{"type", "error"}, {"code", "internal"}, {"message", e.what()}};
    }
    m->done = true;
    m->controller->send(result.dump(), true);
  });
  return m;
}

Response Server::Impl::handle(const Request& req) {
  const auto parts = split_path(std::string_view(req.target().data(), req.target().size()));
  const auto method = req.method();
  try {
    if (parts.size() == 1 && parts[0] == "archive") {
      if (method != http::verb::get) return error_response(req, http::status::method_not_allowed, "method", "use GET");
      return json_response(req, http::status::ok, gm.manifest().dump());
    }
    if (parts.size() == 1 && parts[0] == "session") {
      if (method != http::verb::post) return error_response(req, http::status::method_not_allowed, "method", "use POST");
      const auto id = gm.start_session(string_field(body_json(req), "character"));
      return json_response(req, http::status::ok, nlohmann::json{{"session_id", id}}.dump());
    }
    if (parts.size() == 3 && parts[0] == "session") {
      const auto& id = parts[1];
      const auto& action = parts[2];
      if (action == "playing-data") {
        if (method != http::verb::get) return error_response(req, http::status::method_not_allowed, "method", "use GET");
        return json_response(req, http::status::ok, gm.playing_data(id).to_json().dump(2));
      }
      if (action == "next-opponent") {
        if (method != http::verb::post) return error_response(req, http::status::method_not_allowed, "method", "use POST");
        const auto mode = parse_selection_mode(string_field(body_json(req), "mode", "llm"));
        return json_response(req, http::status::ok, next_opponent_to_json(gm.request_next_opponent(id, mode)).dump(2));
      }
      if (action == "feedback") {
        if (method != http::verb::post) return error_response(req, http::status::method_not_allowed, "method", "use POST");
        const auto data = gm.collect_feedback(id, string_field(body_json(req), "text", ""));
        return json_response(req, http::status::ok, data.to_json().dump(2));
      }
    }
    return error_response(req, http::status::not_found, "not_found", "no route for " + std::string(req.target()));
  } catch (const GmError& e) {
    return error_response(req, status_for(e.code()), e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(req, http::status::bad_request, "bad_json", e.what());
  } catch (const std::exception& e) {
    util::log_error(std::string(req.method_string()) + " " + std::string(req.target()) + " failed: " + e.what());
    return error_response(req, http::status::internal_server_error, "internal", e.what());
  }
}

Server::Server(GameManager& gm, ServerOptions options) : impl_(std::make_unique<Impl>(gm, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->running.exchange(true)) return;
  const tcp::endpoint ep{net::ip::make_address(impl_->options.address), impl_->options.port};
  auto& a = impl_->acceptor;
  a.open(ep.protocol());
  a.set_option(net::socket_base::reuse_address(true));
  a.bind(ep);
  a.listen(net::socket_base::max_listen_connections);
  impl_->port = a.local_endpoint().port();
  impl_->do_accept();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
}

void Server::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(impl_->mu);
    for (auto& [_, m] : impl_->live) m->controller->cancel();
    threads.swap(impl_->match_threads);
  }
  for (auto& t : threads) t.join();
  impl_->workers.join();
  impl_->ioc.stop();
  impl_->io_thread.join();
}

unsigned short Server::port() const { return impl_->port; }

}  // namespace tta::gm
