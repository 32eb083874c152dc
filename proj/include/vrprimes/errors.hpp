#ifndef VRPRIMES_ERRORS_HPP
#define VRPRIMES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vrprimes {

/// Base class for every computational failure raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

#define VRPRIMES_DEFINE_ERROR(Name)        \
	class Name : public Error {            \
	public:                                \
		using Error::Error;                \
	}

VRPRIMES_DEFINE_ERROR(NonInvertible);
VRPRIMES_DEFINE_ERROR(NonResidue);
VRPRIMES_DEFINE_ERROR(BadSeed);
VRPRIMES_DEFINE_ERROR(NotSplit);
VRPRIMES_DEFINE_ERROR(NotPrincipal);
VRPRIMES_DEFINE_ERROR(ConductorNotCoprime);
VRPRIMES_DEFINE_ERROR(InternalInconsistency);
VRPRIMES_DEFINE_ERROR(NotOneModFour);
VRPRIMES_DEFINE_ERROR(NonConvergence);
VRPRIMES_DEFINE_ERROR(CheckpointVersionMismatch);
VRPRIMES_DEFINE_ERROR(IoError);

#undef VRPRIMES_DEFINE_ERROR

} // namespace vrprimes

#endif // VRPRIMES_ERRORS_HPP
