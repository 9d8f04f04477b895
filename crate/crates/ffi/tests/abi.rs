use std::ffi::{CStr, CString};
use std::ptr;

use bhht_ffi::*;

const TWIN_A: &str = r#"{"name":"twin_a","n":5,"monomials":[[4,1,0,0,0],[1,4,0,0,0],[0,0,4,1,0],[0,0,1,4,0],[0,0,0,0,5]],"group":{"generators":[{"den":3,"num":[1,2,0,0,0]},{"den":3,"num":[0,0,1,2,0]},"J"]},"permutation":"(1 3)(2 4)"}"#;

fn load(json: &str) -> (BhhtStatus, *mut BhhtInstance) {
    let c = CString::new(json).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { bhht_instance_from_json(c.as_ptr(), &mut handle) };
    (status, handle)
}

fn last_error() -> Option<String> {
    let p = bhht_last_error();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { bhht_string_free(p) };
    Some(s)
}

#[test]
fn example_values_through_the_abi() {
    let (status, h) = load(TWIN_A);
    assert_eq!(status, BhhtStatus::Ok);
    assert!(last_error().is_none());
    unsafe {
        let mut reduced = 0;
        assert_eq!(bhht_reduced_euler(h, &mut reduced), BhhtStatus::Ok);
        assert_eq!(reduced, -8);

        let (mut lhs, mut rhs, mut equal) = (0, 0, false);
        assert_eq!(
            bhht_verify_duality(h, &mut lhs, &mut rhs, &mut equal),
            BhhtStatus::Ok
        );
        assert_eq!((lhs, rhs, equal), (-8, 8, true));

        let mut order = 0;
        assert_eq!(bhht_group_order(h, &mut order), BhhtStatus::Ok);
        assert_eq!(order, 45);

        let mut dual = ptr::null_mut();
        assert_eq!(bhht_dual(h, &mut dual), BhhtStatus::Ok);
        assert_eq!(bhht_group_order(dual, &mut order), BhhtStatus::Ok);
        assert_eq!(order, 25);
        assert_eq!(bhht_reduced_euler(dual, &mut reduced), BhhtStatus::Ok);
        assert_eq!(reduced, 8);

        let mut json = ptr::null_mut();
        assert_eq!(bhht_instance_to_json(dual, &mut json), BhhtStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        bhht_string_free(json);
        assert!(text.contains("\"twin_a~\""));

        bhht_instance_free(dual);
        bhht_instance_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    let (status, h) = load("{\"name\":\"bad\"");
    assert_eq!(status, BhhtStatus::InvalidInput);
    assert!(h.is_null());
    assert!(last_error().unwrap().contains("parse"));

    let (status, _) =
        load(r#"{"name":"d","n":2,"monomials":[[4,0],[2,2]],"group":{"generators":[]}}"#);
    assert_eq!(status, BhhtStatus::InvalidInput);
    assert!(last_error().unwrap().contains("degenerate"));

    unsafe {
        let mut out = 0;
        assert_eq!(
            bhht_reduced_euler(ptr::null(), &mut out),
            BhhtStatus::NullPointer
        );
        assert_eq!(
            bhht_instance_from_json(ptr::null(), &mut ptr::null_mut()),
            BhhtStatus::NullPointer
        );
        bhht_instance_free(ptr::null_mut());
        bhht_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bhht.h")).unwrap();
    for name in [
        "typedef struct BhhtInstance BhhtInstance",
        "BHHT_STATUS_INVALID_INPUT",
        "bhht_instance_from_json",
        "bhht_reduced_euler",
        "bhht_verify_duality",
        "bhht_dual",
        "bhht_group_order",
        "bhht_last_error",
        "bhht_string_free",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
