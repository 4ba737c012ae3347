//! C ABI for the ratsolve exact game solvers.
//!
//! Every function is panic-safe: panics are caught at the boundary and
//! surfaced as [`RsStatus::InternalPanic`]. Objects cross the boundary as
//! opaque handles that must be released with their matching `_free`
//! function; rendered reports are NUL-terminated UTF-8 strings released
//! with [`rs_string_free`]. After any call that returns a status other
//! than [`RsStatus::Ok`], [`rs_last_error_message`] describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ratsolve::format::{parse_input, InputFile};
use ratsolve::game::{BeliefRestriction, InformationStructure, Player};
use ratsolve::oracle::sample_structures_for_check;
use ratsolve::report::{render_solve, render_union};
use ratsolve::robust::check_union;
use ratsolve::solver::{solve_bfr, solve_delta_r, solve_icr, SolveKind, SolveResult};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RsStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A text argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The instance text was rejected; the message carries line and column.
    ParseError = 3,
    /// The requested operation needs a section the instance lacks.
    MissingSection = 4,
    /// A scalar argument was out of range.
    InvalidArgument = 5,
    /// An internal invariant failed; the library state is still usable.
    InternalPanic = 6,
}

/// Solution concept selector; pass one of these values as the `concept`
/// argument of [`rs_solve`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RsConcept {
    /// Belief-free rationalizability.
    BeliefFree = 0,
    /// Rationalizability under the instance's first-order restriction.
    Restricted = 1,
    /// Interim correlated rationalizability on the instance's structure.
    Interim = 2,
}

/// A parsed instance: an environment plus optional restriction and
/// structure sections.
pub struct RsInstance {
    input: InputFile,
}

/// A solved correspondence, self-contained for reporting and queries.
pub struct RsSolution {
    env: ratsolve::game::EconomicEnvironment,
    structure: Option<InformationStructure>,
    result: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes were removed");
    });
}

fn fail(status: RsStatus, message: &str) -> RsStatus {
    set_last_error(message);
    status
}

/// Runs a body with panics converted to `InternalPanic`, clearing the
/// error slot first so `rs_last_error_message` reflects this call.
fn guarded(body: impl FnOnce() -> RsStatus) -> RsStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(RsStatus::InternalPanic, "internal panic"),
    }
}

/// Message describing the most recent failure on this thread, or an empty
/// string after a success. The pointer stays valid until the next library
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn rs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses instance text into a handle. On success `*out` owns the
/// instance; release it with [`rs_instance_free`].
#[no_mangle]
pub unsafe extern "C" fn rs_instance_parse(
    text: *const c_char,
    out: *mut *mut RsInstance,
) -> RsStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(RsStatus::NullArgument, "text and out must be non-NULL");
        }
        let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
            return fail(RsStatus::InvalidUtf8, "instance text must be UTF-8");
        };
        match parse_input(text) {
            Ok(input) => {
                unsafe { *out = Box::into_raw(Box::new(RsInstance { input })) };
                RsStatus::Ok
            }
            Err(e) => fail(RsStatus::ParseError, &e.to_string()),
        }
    })
}

/// Releases an instance handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_instance_free(instance: *mut RsInstance) {
    if !instance.is_null() {
        drop(unsafe { Box::from_raw(instance) });
    }
}

/// Solves the instance under a concept. `selector` must be an
/// [`RsConcept`] value; the restricted concept treats a missing
/// restriction section as unrestricted, while the interim concept requires
/// a structure section. On success `*out` owns the solution; release it
/// with [`rs_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn rs_solve(
    instance: *const RsInstance,
    selector: i32,
    out: *mut *mut RsSolution,
) -> RsStatus {
    guarded(|| {
        if instance.is_null() || out.is_null() {
            return fail(RsStatus::NullArgument, "instance and out must be non-NULL");
        }
        let input = &unsafe { &*instance }.input;
        let (result, structure) = match selector {
            x if x == RsConcept::BeliefFree as i32 => (solve_bfr(&input.env), None),
            x if x == RsConcept::Restricted as i32 => {
                let restriction = input
                    .restriction
                    .clone()
                    .unwrap_or_else(|| BeliefRestriction::unrestricted(&input.env));
                (solve_delta_r(&input.env, &restriction), None)
            }
            x if x == RsConcept::Interim as i32 => match &input.structure {
                Some(structure) => {
                    (solve_icr(&input.env, structure), Some(structure.clone()))
                }
                None => {
                    return fail(
                        RsStatus::MissingSection,
                        "instance has no [structure] section",
                    )
                }
            },
            other => {
                return fail(RsStatus::InvalidArgument, &format!("unknown concept selector {other}"))
            }
        };
        let solution = RsSolution { env: input.env.clone(), structure, result };
        unsafe { *out = Box::into_raw(Box::new(solution)) };
        RsStatus::Ok
    })
}

/// Releases a solution handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_solution_free(solution: *mut RsSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Stores the number of elimination rounds the solve needed in `*out`.
#[no_mangle]
pub unsafe extern "C" fn rs_solution_rounds(
    solution: *const RsSolution,
    out: *mut usize,
) -> RsStatus {
    guarded(|| {
        if solution.is_null() || out.is_null() {
            return fail(RsStatus::NullArgument, "solution and out must be non-NULL");
        }
        unsafe { *out = (*solution).result.elimination_rounds() };
        RsStatus::Ok
    })
}

/// Stores in `*out` whether `action` survives for `player` (1 or 2) at
/// `payoff_type`. `signal` must be 0 unless the solution is interim, in
/// which case it selects the signal. All indices are zero-based.
#[no_mangle]
pub unsafe extern "C" fn rs_solution_is_rationalizable(
    solution: *const RsSolution,
    player: i32,
    payoff_type: usize,
    signal: usize,
    action: usize,
    out: *mut bool,
) -> RsStatus {
    guarded(|| {
        if solution.is_null() || out.is_null() {
            return fail(RsStatus::NullArgument, "solution and out must be non-NULL");
        }
        let solution = unsafe { &*solution };
        let Some(player) = Player::from_number(player.max(0) as usize) else {
            return fail(RsStatus::InvalidArgument, "player must be 1 or 2");
        };
        if payoff_type >= solution.env.num_types(player) {
            return fail(RsStatus::InvalidArgument, "payoff_type index out of range");
        }
        if action >= solution.env.num_actions(player) {
            return fail(RsStatus::InvalidArgument, "action index out of range");
        }
        let correspondence = solution.result.final_correspondence();
        let signal_bound = match solution.result.kind {
            SolveKind::Interim => correspondence.num_signals(player),
            SolveKind::BeliefFree | SolveKind::Delta => 1,
        };
        if signal >= signal_bound {
            return fail(RsStatus::InvalidArgument, "signal index out of range");
        }
        unsafe { *out = correspondence.get(player, payoff_type, signal).contains(&action) };
        RsStatus::Ok
    })
}

fn export_string(text: String, out: *mut *mut c_char) -> RsStatus {
    let sanitized: String = text.chars().filter(|&c| c != '\0').collect();
    let exported = CString::new(sanitized).expect("NUL bytes were removed");
    unsafe { *out = exported.into_raw() };
    RsStatus::Ok
}

/// Renders the solution report (the same text the command-line `solve`
/// prints), optionally with the round trace and the justifying
/// conjectures. On success `*out` owns the string; release it with
/// [`rs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rs_solution_report(
    solution: *const RsSolution,
    trace: bool,
    witnesses: bool,
    out: *mut *mut c_char,
) -> RsStatus {
    guarded(|| {
        if solution.is_null() || out.is_null() {
            return fail(RsStatus::NullArgument, "solution and out must be non-NULL");
        }
        let solution = unsafe { &*solution };
        let text = render_solve(
            &solution.env,
            solution.structure.as_ref(),
            &solution.result,
            trace,
            witnesses,
        );
        export_string(text, out)
    })
}

/// Runs the rationalizability union check against `samples` seeded random
/// structures plus the canonical one (the same computation as the
/// command-line `check union`). Stores the rendered report in `*report`
/// (release with [`rs_string_free`]) and whether the identity held in
/// `*holds`.
#[no_mangle]
pub unsafe extern "C" fn rs_check_union(
    instance: *const RsInstance,
    samples: usize,
    seed: u64,
    report: *mut *mut c_char,
    holds: *mut bool,
) -> RsStatus {
    guarded(|| {
        if instance.is_null() || report.is_null() || holds.is_null() {
            return fail(
                RsStatus::NullArgument,
                "instance, report, and holds must be non-NULL",
            );
        }
        let input = &unsafe { &*instance }.input;
        let restriction = input
            .restriction
            .clone()
            .unwrap_or_else(|| BeliefRestriction::unrestricted(&input.env));
        let extra =
            sample_structures_for_check(&input.env, input.restriction.as_ref(), samples, seed);
        match check_union(&input.env, &restriction, &extra) {
            Ok(union) => {
                unsafe { *holds = union.equal() };
                export_string(render_union(&input.env, &union, extra.len()), report)
            }
            Err(e) => fail(RsStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Releases a string produced by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
