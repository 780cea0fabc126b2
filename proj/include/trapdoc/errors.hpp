#pragma once

#include <stdexcept>
#include <string>

namespace trapdoc {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pdf-io
struct MalformedHeader : Error { using Error::Error; };
struct XrefNotFound : Error { using Error::Error; };
struct UnsupportedEncryption : Error { using Error::Error; };
struct CircularReference : Error { using Error::Error; };
struct UnsupportedFilter : Error { using Error::Error; };
struct CorruptStream : Error { using Error::Error; };
struct UnresolvableReference : Error { using Error::Error; };

// content-stream
struct UnbalancedString : Error { using Error::Error; };
struct DanglingOperands : Error { using Error::Error; };
struct UnterminatedInlineImage : Error { using Error::Error; };

// extraction
struct PageError : Error { using Error::Error; };

// inject / perturb
struct EmptyPayload : Error { using Error::Error; };
struct EncryptedDocument : Error { using Error::Error; };
struct CorpusTooSmall : Error { using Error::Error; };

// llm-client
struct LlmError : Error { using Error::Error; };
struct LlmRequired : LlmError { using LlmError::LlmError; };
struct MissingApiKey : LlmError { using LlmError::LlmError; };
struct LlmUnavailable : LlmError { using LlmError::LlmError; };
struct LlmRefusal : LlmError { using LlmError::LlmError; };
struct HttpError : LlmError {
    int status;
    explicit HttpError(int s, const std::string& msg) : LlmError(msg), status(s) {}
};
struct MalformedResponse : LlmError { using LlmError::LlmError; };
struct StubFail : LlmError { using LlmError::LlmError; };

}  // namespace trapdoc
