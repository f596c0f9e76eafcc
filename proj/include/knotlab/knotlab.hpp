#pragma once

// Everything except the HTTP listener (knotlab/http_server.hpp), which pulls
// in httplib and needs a thread library at link time.

#include "knotlab/activities.hpp"
#include "knotlab/catalog.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/equivalence.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/laurent.hpp"
#include "knotlab/layout.hpp"
#include "knotlab/moves.hpp"
#include "knotlab/render.hpp"
#include "knotlab/serialize.hpp"
#include "knotlab/service.hpp"
