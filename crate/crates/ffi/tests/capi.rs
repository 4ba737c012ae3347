//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, status codes, and the thread-local error message.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use ratsolve_ffi::{
    rs_check_union, rs_instance_free, rs_instance_parse, rs_last_error_message, rs_solution_free,
    rs_solution_is_rationalizable, rs_solution_report, rs_solution_rounds, rs_solve,
    rs_string_free, rs_version, RsConcept, RsInstance, RsSolution, RsStatus,
};

fn fixture_text(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name);
    CString::new(std::fs::read_to_string(path).expect("fixture exists")).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(rs_last_error_message()) }.to_str().unwrap().to_owned()
}

fn parse(name: &str) -> *mut RsInstance {
    let text = fixture_text(name);
    let mut instance: *mut RsInstance = ptr::null_mut();
    let status = unsafe { rs_instance_parse(text.as_ptr(), &mut instance) };
    assert_eq!(status, RsStatus::Ok, "{}", last_error());
    assert!(!instance.is_null());
    instance
}

fn take_string(text: *mut c_char) -> String {
    assert!(!text.is_null());
    let owned = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { rs_string_free(text) };
    owned
}

#[test]
fn version_is_a_static_semver_string() {
    let version = unsafe { CStr::from_ptr(rs_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn solving_a_parsed_instance_reports_like_the_cli() {
    let instance = parse("dominant.game");
    let mut solution: *mut RsSolution = ptr::null_mut();
    let status = unsafe { rs_solve(instance, RsConcept::BeliefFree as i32, &mut solution) };
    assert_eq!(status, RsStatus::Ok, "{}", last_error());

    let mut rounds = usize::MAX;
    assert_eq!(unsafe { rs_solution_rounds(solution, &mut rounds) }, RsStatus::Ok);
    assert_eq!(rounds, 1, "one elimination round removes the dominated actions");

    let mut report: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { rs_solution_report(solution, false, false, &mut report) },
        RsStatus::Ok
    );
    let text = take_string(report);
    assert!(text.contains("concept: belief-free rationalizability"), "{text}");
    assert!(text.contains("player 1 type s1: safe"), "{text}");

    // Membership queries agree with the report: action 0 ("safe")
    // survives for player 1, action 1 ("risky") does not.
    let mut member = false;
    assert_eq!(
        unsafe { rs_solution_is_rationalizable(solution, 1, 0, 0, 0, &mut member) },
        RsStatus::Ok
    );
    assert!(member);
    assert_eq!(
        unsafe { rs_solution_is_rationalizable(solution, 1, 0, 0, 1, &mut member) },
        RsStatus::Ok
    );
    assert!(!member);

    unsafe { rs_solution_free(solution) };
    unsafe { rs_instance_free(instance) };
}

#[test]
fn interim_solves_use_the_structure_section() {
    let instance = parse("coordination.game");
    let mut solution: *mut RsSolution = ptr::null_mut();
    assert_eq!(
        unsafe { rs_solve(instance, RsConcept::Interim as i32, &mut solution) },
        RsStatus::Ok
    );
    let mut report: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { rs_solution_report(solution, true, false, &mut report) }, RsStatus::Ok);
    let text = take_string(report);
    assert!(text.contains("concept: interim correlated rationalizability"), "{text}");
    assert!(text.contains("signal y1"), "{text}");
    assert!(text.contains("trace:"), "{text}");
    unsafe { rs_solution_free(solution) };
    unsafe { rs_instance_free(instance) };
}

#[test]
fn interim_solves_without_a_structure_are_refused() {
    let instance = parse("pennies.game");
    let mut solution: *mut RsSolution = ptr::null_mut();
    let status = unsafe { rs_solve(instance, RsConcept::Interim as i32, &mut solution) };
    assert_eq!(status, RsStatus::MissingSection);
    assert!(solution.is_null());
    assert!(last_error().contains("no [structure] section"), "{}", last_error());
    unsafe { rs_instance_free(instance) };
}

#[test]
fn unknown_concept_selectors_are_refused() {
    let instance = parse("pennies.game");
    let mut solution: *mut RsSolution = ptr::null_mut();
    assert_eq!(unsafe { rs_solve(instance, 99, &mut solution) }, RsStatus::InvalidArgument);
    assert!(last_error().contains("unknown concept selector 99"));
    unsafe { rs_instance_free(instance) };
}

#[test]
fn parse_failures_carry_position_information() {
    let text = CString::new("[environment]\nstates = n1\nbogus = 1\n").unwrap();
    let mut instance: *mut RsInstance = ptr::null_mut();
    let status = unsafe { rs_instance_parse(text.as_ptr(), &mut instance) };
    assert_eq!(status, RsStatus::ParseError);
    assert!(instance.is_null());
    assert!(last_error().contains("line 3, column 1"), "{}", last_error());
}

#[test]
fn invalid_utf8_is_rejected_before_parsing() {
    let bytes: &[u8] = b"[environment]\xFF\0";
    let mut instance: *mut RsInstance = ptr::null_mut();
    let status =
        unsafe { rs_instance_parse(bytes.as_ptr().cast::<c_char>(), &mut instance) };
    assert_eq!(status, RsStatus::InvalidUtf8);
}

#[test]
fn null_arguments_never_crash() {
    let mut instance: *mut RsInstance = ptr::null_mut();
    assert_eq!(
        unsafe { rs_instance_parse(ptr::null(), &mut instance) },
        RsStatus::NullArgument
    );
    let mut solution: *mut RsSolution = ptr::null_mut();
    assert_eq!(
        unsafe { rs_solve(ptr::null(), RsConcept::BeliefFree as i32, &mut solution) },
        RsStatus::NullArgument
    );
    assert_eq!(unsafe { rs_solution_rounds(ptr::null(), ptr::null_mut()) }, RsStatus::NullArgument);
    unsafe {
        rs_instance_free(ptr::null_mut());
        rs_solution_free(ptr::null_mut());
        rs_string_free(ptr::null_mut());
    }
}

#[test]
fn out_of_range_queries_are_refused() {
    let instance = parse("pennies.game");
    let mut solution: *mut RsSolution = ptr::null_mut();
    assert_eq!(
        unsafe { rs_solve(instance, RsConcept::BeliefFree as i32, &mut solution) },
        RsStatus::Ok
    );
    let mut member = false;
    assert_eq!(
        unsafe { rs_solution_is_rationalizable(solution, 3, 0, 0, 0, &mut member) },
        RsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { rs_solution_is_rationalizable(solution, 1, 9, 0, 0, &mut member) },
        RsStatus::InvalidArgument
    );
    // Non-interim solutions only accept signal 0.
    assert_eq!(
        unsafe { rs_solution_is_rationalizable(solution, 1, 0, 1, 0, &mut member) },
        RsStatus::InvalidArgument
    );
    unsafe { rs_solution_free(solution) };
    unsafe { rs_instance_free(instance) };
}

#[test]
fn union_check_matches_the_cli_semantics() {
    let instance = parse("pennies.game");
    let mut report: *mut c_char = ptr::null_mut();
    let mut holds = false;
    let status = unsafe { rs_check_union(instance, 5, 7, &mut report, &mut holds) };
    assert_eq!(status, RsStatus::Ok, "{}", last_error());
    assert!(holds);
    let text = take_string(report);
    assert!(text.contains("structures: 1 canonical + 5 supplied"), "{text}");
    assert!(text.contains("counterexamples: 0"), "{text}");
    assert!(text.contains("verdict: holds"), "{text}");
    unsafe { rs_instance_free(instance) };
}

#[test]
fn generated_header_declares_the_full_surface() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ratsolve.h"),
    )
    .expect("build script writes the header");
    for symbol in [
        "typedef enum RsStatus",
        "typedef enum RsConcept",
        "typedef struct RsInstance RsInstance",
        "typedef struct RsSolution RsSolution",
        "rs_instance_parse",
        "rs_instance_free",
        "rs_solve",
        "rs_solution_rounds",
        "rs_solution_is_rationalizable",
        "rs_solution_report",
        "rs_solution_free",
        "rs_check_union",
        "rs_string_free",
        "rs_last_error_message",
        "rs_version",
    ] {
        assert!(header.contains(symbol), "header must declare {symbol}");
    }
}
