#pragma once

#include <atomic>
#include <cstddef>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "isc3/constraints.hpp"
#include "isc3/json_io.hpp"
#include "isc3/solvers.hpp"

namespace isc3 {

// Wire error codes (the error response's `code` field).
enum WireErrorCode {
    wire_err_parse = 1,
    wire_err_schema = 2,
    wire_err_unknown_method = 3,
    wire_err_solver = 4,
};

struct HostPort {
    std::string host;
    int port = 0;
};

HostPort parse_address(const std::string& address);  // "host:port", throws ArgumentError

struct EdgeServerConfig {
    Models models;  // server-side defaults when a request omits models
    std::size_t max_frame_bytes = 16 * 1024 * 1024;
};

// Newline-delimited JSON request/response service over TCP. One request
// line yields exactly one response line; requests on a connection are
// served in order; connections are independent and the server keeps no
// state across requests.
class EdgeServer {
public:
    explicit EdgeServer(EdgeServerConfig config = {});
    ~EdgeServer();

    EdgeServer(const EdgeServer&) = delete;
    EdgeServer& operator=(const EdgeServer&) = delete;

    // Binds (port 0 picks an ephemeral port), then accepts on a background
    // thread. Returns the bound port. Throws BindError.
    int start(const std::string& host, int port);
    int port() const { return port_; }
    void stop();
    void wait();  // joins the accept loop (serve subcommand)

    // Dispatch for one already-parsed frame; exposed for direct testing.
    json process_line(const std::string& line) const;

private:
    void accept_loop();
    void handle_connection(int fd);

    EdgeServerConfig config_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    mutable std::mutex mutex_;
    std::vector<std::thread> workers_;
    std::vector<int> client_fds_;
};

// One TCP connection speaking the wire protocol. The timeout covers
// connect and each send/receive.
class EdgeConnection {
public:
    EdgeConnection(const std::string& address, double timeout_s = 30.0);  // throws TransportError
    ~EdgeConnection();

    EdgeConnection(const EdgeConnection&) = delete;
    EdgeConnection& operator=(const EdgeConnection&) = delete;

    void send_line(const std::string& line);
    std::string recv_line();

    // Round-trips one request; throws RemoteError on an error response.
    json call(const std::string& method, const json& params, const std::string& id);

private:
    int fd_ = -1;
    std::string buffer_;
};

// Remote solve round trip; the result passes the same invariants as a
// local SolverResult. Throws TransportError / RemoteError.
SolverResult solve_remote(const std::string& address, const DeliveryInstance& instance,
                          const Isc3Demands& demands, const SolverConfig& config,
                          const Models& models = {}, double timeout_s = 30.0);

}  // namespace isc3
