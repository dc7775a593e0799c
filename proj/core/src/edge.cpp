#include "isc3/edge.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "isc3/errors.hpp"
#include "isc3/log.hpp"
#include "isc3/pipeline.hpp"

namespace isc3 {

namespace {

json error_response(const json& id, int code, const std::string& message) {
    json j;
    j["id"] = id;
    j["error"] = {{"code", code}, {"message", message}};
    return j;
}

json result_response(const json& id, json result) {
    json j;
    j["id"] = id;
    j["result"] = std::move(result);
    return j;
}

void set_io_timeout(int fd, double timeout_s) {
    timeval tv;
    tv.tv_sec = static_cast<long>(timeout_s);
    tv.tv_usec = static_cast<long>((timeout_s - static_cast<double>(tv.tv_sec)) * 1e6);
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

bool send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

HostPort parse_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= address.size())
        throw ArgumentError("address must be host:port, got '" + address + "'");
    HostPort hp;
    hp.host = address.substr(0, colon);
    try {
        hp.port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        throw ArgumentError("invalid port in address '" + address + "'");
    }
    if (hp.port < 0 || hp.port > 65535)
        throw ArgumentError("port out of range in address '" + address + "'");
    return hp;
}

EdgeServer::EdgeServer(EdgeServerConfig config) : config_(std::move(config)) {}

EdgeServer::~EdgeServer() { stop(); }

int EdgeServer::start(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string port_str = std::to_string(port);
    if (::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res) != 0 || res == nullptr)
        throw BindError("cannot resolve bind address '" + host + ":" + port_str + "'");

    int fd = -1;
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        const int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw BindError("cannot bind '" + host + ":" + port_str + "': " + std::strerror(errno));
    if (::listen(fd, 64) != 0) {
        ::close(fd);
        throw BindError("listen failed: " + std::string(std::strerror(errno)));
    }

    sockaddr_storage addr{};
    socklen_t len = sizeof(addr);
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
        if (addr.ss_family == AF_INET)
            port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
        else if (addr.ss_family == AF_INET6)
            port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    }

    listen_fd_ = fd;
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
    log::info("edge server listening on ", host, ":", port_);
    return port_;
}

void EdgeServer::stop() {
    if (!running_.exchange(false)) {
        if (accept_thread_.joinable()) accept_thread_.join();
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
        workers.swap(workers_);
    }
    for (auto& w : workers) {
        if (w.joinable()) w.join();
    }
}

void EdgeServer::wait() {
    if (accept_thread_.joinable()) accept_thread_.join();
}

void EdgeServer::accept_loop() {
    while (running_) {
        const int client = ::accept(listen_fd_, nullptr, nullptr);
        if (client < 0) {
            if (!running_) break;
            continue;
        }
        std::lock_guard<std::mutex> lock(mutex_);
        client_fds_.push_back(client);
        workers_.emplace_back([this, client] { handle_connection(client); });
    }
}

void EdgeServer::handle_connection(int fd) {
    std::string buffer;
    char chunk[4096];
    bool open = true;
    while (open && running_) {
        const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));

        std::size_t start = 0;
        for (;;) {
            const std::size_t nl = buffer.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = buffer.substr(start, nl - start);
            start = nl + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;  // tolerate blank keep-alive lines
            const json response = process_line(line);
            if (!send_all(fd, response.dump() + "\n")) {
                open = false;
                break;
            }
        }
        buffer.erase(0, start);

        if (buffer.size() > config_.max_frame_bytes) {
            // Framing is unrecoverable past the cap: answer once and close.
            send_all(fd, error_response("", wire_err_parse, "frame exceeds maximum size").dump() + "\n");
            break;
        }
    }
    ::close(fd);
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto it = client_fds_.begin(); it != client_fds_.end(); ++it) {
        if (*it == fd) {
            client_fds_.erase(it);
            break;
        }
    }
}

json EdgeServer::process_line(const std::string& line) const {
    json request;
    try {
        request = json::parse(line);
    } catch (const json::exception& e) {
        return error_response("", wire_err_parse, std::string("malformed JSON: ") + e.what());
    }
    if (!request.is_object())
        return error_response("", wire_err_schema, "request must be a JSON object");

    json id = "";
    if (auto it = request.find("id"); it != request.end() && it->is_string()) id = *it;
    if (id.get<std::string>().empty())
        return error_response(id, wire_err_schema, "request id must be a non-empty string");
    if (!request.contains("method") || !request.at("method").is_string())
        return error_response(id, wire_err_schema, "request method must be a string");
    const std::string method = request.at("method").get<std::string>();
    const json params = request.value("params", json::object());

    try {
        if (method == "health") return result_response(id, "ok");

        if (method == "solve") {
            if (!params.is_object()) throw SchemaError("solve params must be an object");
            if (!params.contains("instance")) throw SchemaError("solve params: missing instance");
            const DeliveryInstance instance = instance_from_json(params.at("instance"));
            const Isc3Demands demands = params.contains("demands")
                                            ? demands_from_json(params.at("demands"))
                                            : Isc3Demands{};
            const SolverConfig config = params.contains("config")
                                            ? solver_config_from_json(params.at("config"))
                                            : SolverConfig{};
            const Models models = models_from_parent_json(
                params.contains("models") ? params.at("models") : json::object(), config_.models);
            try {
                const SolverResult result = solve(instance, demands, models, config);
                return result_response(id, result_to_json(result, instance));
            } catch (const Error& e) {
                return error_response(id, wire_err_solver, e.what());
            }
        }

        if (method == "cognize") {
            if (!params.is_object()) throw SchemaError("cognize params must be an object");
            if (!params.contains("demands")) throw SchemaError("cognize params: missing demands");
            if (!params.contains("scene_summary"))
                throw SchemaError("cognize params: missing scene_summary");
            const Isc3Demands demands = demands_from_json(params.at("demands"));
            const SceneSummary summary = scene_summary_from_json(params.at("scene_summary"));
            SolverConfig base;
            bool forced = false;
            if (params.contains("solver")) {
                base = solver_config_from_json(params.at("solver"));
                forced = params.at("solver").contains("algorithm");
            }
            std::string edge_address;
            if (auto it = params.find("edge_address"); it != params.end() && it->is_string())
                edge_address = it->get<std::string>();
            RuleBasedAgent agent(base, forced, edge_address);
            return result_response(id, task_spec_to_json(agent.plan(demands, summary)));
        }

        return error_response(id, wire_err_unknown_method, "unknown method '" + method + "'");
    } catch (const ParseError& e) {
        return error_response(id, wire_err_parse, e.what());
    } catch (const Error& e) {
        return error_response(id, wire_err_schema, e.what());
    }
}

EdgeConnection::EdgeConnection(const std::string& address, double timeout_s) {
    const HostPort hp = parse_address(address);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(hp.host.c_str(), std::to_string(hp.port).c_str(), &hints, &res) != 0 ||
        res == nullptr)
        throw TransportError("cannot resolve '" + address + "'");

    int fd = -1;
    std::string last_error = "connect failed";
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;

        // Non-blocking connect bounded by the timeout.
        const int flags = ::fcntl(fd, F_GETFL, 0);
        ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno == EINPROGRESS) {
            pollfd pfd{fd, POLLOUT, 0};
            const int ready = ::poll(&pfd, 1, static_cast<int>(timeout_s * 1000.0));
            if (ready == 1) {
                int err = 0;
                socklen_t len = sizeof(err);
                ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                rc = err == 0 ? 0 : -1;
                if (err != 0) last_error = std::strerror(err);
            } else {
                rc = -1;
                last_error = "connect timeout";
            }
        } else if (rc != 0) {
            last_error = std::strerror(errno);
        }
        if (rc == 0) {
            ::fcntl(fd, F_SETFL, flags);
            break;
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw TransportError("cannot connect to '" + address + "': " + last_error);
    set_io_timeout(fd, timeout_s);
    fd_ = fd;
}

EdgeConnection::~EdgeConnection() {
    if (fd_ >= 0) ::close(fd_);
}

void EdgeConnection::send_line(const std::string& line) {
    if (!send_all(fd_, line + "\n")) throw TransportError("send failed");
}

std::string EdgeConnection::recv_line() {
    for (;;) {
        const std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n == 0) throw TransportError("connection closed by peer");
        if (n < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw TransportError("receive timeout");
            throw TransportError(std::string("receive failed: ") + std::strerror(errno));
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

json EdgeConnection::call(const std::string& method, const json& params, const std::string& id) {
    json request;
    request["id"] = id;
    request["method"] = method;
    request["params"] = params;
    send_line(request.dump());
    json response;
    try {
        response = json::parse(recv_line());
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed response: ") + e.what());
    }
    if (!response.is_object() || response.value("id", "") != id)
        throw TransportError("response id does not match request id '" + id + "'");
    if (response.contains("error")) {
        const json& err = response.at("error");
        throw RemoteError(err.value("code", 0), err.value("message", "remote error"));
    }
    if (!response.contains("result")) throw TransportError("response carries neither result nor error");
    return response.at("result");
}

SolverResult solve_remote(const std::string& address, const DeliveryInstance& instance,
                          const Isc3Demands& demands, const SolverConfig& config,
                          const Models& models, double timeout_s) {
    EdgeConnection conn(address, timeout_s);
    json params;
    params["instance"] = instance_to_json(instance);
    params["demands"] = demands_to_json(demands);
    params["config"] = solver_config_to_json(config);
    params["models"] = models_to_json(models);
    const json result = conn.call("solve", params, "solve-1");
    return result_from_json(result, instance);
}

}  // namespace isc3
