#pragma once

#include <string>

#include "energykg/query.hpp"
#include "energykg/rdf.hpp"
#include "energykg/vocab.hpp"

namespace httplib {
class Server;
}

namespace energykg {

// Registers GET/POST /query on the server. The graph must be frozen and stay
// alive for the server's lifetime; handlers run concurrently against it with
// no locking. Bodies of successful responses are byte-identical to the
// `query` command's JSON output for the same query.
void attach_query_endpoints(httplib::Server& server, const Graph& graph,
                            const TermRegistry& registry);

// Blocks serving until the process ends. Throws on bind failure.
void run_query_service(const Graph& graph, const TermRegistry& registry,
                       const std::string& host, int port);

// "HOST:PORT" -> pair; usage error when malformed.
std::pair<std::string, int> parse_listen_address(const std::string& listen);

}  // namespace energykg
