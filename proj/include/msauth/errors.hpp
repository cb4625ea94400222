#pragma once

#include <stdexcept>
#include <string>

namespace msauth {

// Rejection reasons are distinct for logs and tests, but a rejecting peer
// sends nothing on the wire, so an outside observer cannot tell them apart.
enum class Reject {
    width_violation,
    credential_mismatch,
    duplicate_identity,
    unknown_server,
    unknown_user,
    stale_request,
    request_forgery,
    stale_response,
    response_forgery,
    replayed_request,
    weak_password,
    malformed_frame,
    login_in_progress,
    no_pending_login,
    resource_budget_exceeded,
};

const char* to_string(Reject r);

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Reject code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    Reject code() const { return code_; }

private:
    Reject code_;
};

}  // namespace msauth
