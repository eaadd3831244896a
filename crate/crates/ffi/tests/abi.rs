use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cloudlab_ffi::*;

fn dataset(spec: &str) -> *mut CloudlabCloud {
    let s = CString::new(spec).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { cloudlab_cloud_from_dataset(s.as_ptr(), &mut h) },
        CloudlabStatus::Ok
    );
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cloudlab_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn firefly_through_the_abi() {
    let h = dataset("firefly");
    unsafe {
        assert_eq!(cloudlab_cloud_vertex_count(h), 5);
        assert_eq!(cloudlab_cloud_context_count(h), 2);
        let mut n = 0u64;
        assert_eq!(cloudlab_count_states(h, &mut n), CloudlabStatus::Ok);
        assert_eq!(n, 5);
        let (a, b) = (CString::new("a").unwrap(), CString::new("b").unwrap());
        let mut r = CloudlabRelation::Tits;
        assert_eq!(
            cloudlab_classify_pair(h, a.as_ptr(), b.as_ptr(), CloudlabKind::Ii, &mut r),
            CloudlabStatus::Ok
        );
        assert_eq!(r, CloudlabRelation::Independent);
        let mut ks = true;
        assert_eq!(cloudlab_ks_check(h, &mut ks), CloudlabStatus::Ok);
        assert!(!ks);
        let mut chi = 0usize;
        assert_eq!(cloudlab_chromatic_number(h, &mut chi), CloudlabStatus::Ok);
        assert_eq!(chi, 3);
        let mut bad = 9usize;
        assert_eq!(
            cloudlab_verify_representation(h, &mut bad),
            CloudlabStatus::Ok
        );
        assert_eq!(bad, 0);
        let mut s = ptr::null_mut();
        assert_eq!(cloudlab_cloud_serialize(h, &mut s), CloudlabStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_string();
        cloudlab_string_free(s);
        assert!(text.starts_with("cloud firefly\n"));

        let mut h2 = ptr::null_mut();
        let src = CString::new(text).unwrap();
        assert_eq!(
            cloudlab_cloud_parse(src.as_ptr(), &mut h2),
            CloudlabStatus::Ok
        );
        assert_eq!(cloudlab_cloud_vertex_count(h2), 5);
        cloudlab_cloud_free(h2);
        cloudlab_cloud_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        let bad = CString::new("cloud x\ncontext a a\n").unwrap();
        assert_eq!(
            cloudlab_cloud_parse(bad.as_ptr(), &mut h),
            CloudlabStatus::Parse
        );
        assert!(h.is_null());
        assert!(last_error().contains("line 2"), "{}", last_error());

        let nope = CString::new("nope").unwrap();
        assert_eq!(
            cloudlab_cloud_from_dataset(nope.as_ptr(), &mut h),
            CloudlabStatus::UnknownDataset
        );
        let param = CString::new("hh10(x=3)").unwrap();
        assert_eq!(
            cloudlab_cloud_from_dataset(param.as_ptr(), &mut h),
            CloudlabStatus::InvalidArgument
        );
        assert_eq!(
            cloudlab_cloud_parse(ptr::null(), &mut h),
            CloudlabStatus::NullPointer
        );

        let t = dataset("triangle");
        let mut n = 0usize;
        assert_eq!(
            cloudlab_verify_representation(t, &mut n),
            CloudlabStatus::NoRepresentation
        );
        let (x, q) = (CString::new("x").unwrap(), CString::new("q").unwrap());
        let mut r = CloudlabRelation::Tifs;
        assert_eq!(
            cloudlab_classify_pair(t, x.as_ptr(), q.as_ptr(), CloudlabKind::Ii, &mut r),
            CloudlabStatus::UnknownVertex
        );
        assert_eq!(
            cloudlab_count_states(t, ptr::null_mut()),
            CloudlabStatus::NullPointer
        );
        let mut ks = false;
        assert_eq!(cloudlab_ks_check(t, &mut ks), CloudlabStatus::Ok);
        assert!(ks);
        cloudlab_cloud_free(t);
        cloudlab_cloud_free(ptr::null_mut());
        assert_eq!(cloudlab_cloud_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/cloudlab.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

/// Compiles and runs a C program against the header and static library
/// when a C compiler is on the path.
#[test]
fn c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcloudlab_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let c_src = tmp.path().join("smoke.c");
    std::fs::write(
        &c_src,
        r#"
#include <stdio.h>
#include "cloudlab.h"
int main(void) {
    CloudlabCloud *h = NULL;
    if (cloudlab_cloud_from_dataset("tifs38", &h) != CLOUDLAB_STATUS_OK) return 10;
    uint64_t n = 0;
    if (cloudlab_count_states(h, &n) != CLOUDLAB_STATUS_OK) return 11;
    CloudlabRelation r;
    if (cloudlab_classify_pair(h, "a", "b", CLOUDLAB_KIND_III, &r) != CLOUDLAB_STATUS_OK) return 12;
    printf("%llu %d\n", (unsigned long long)n, (int)r);
    cloudlab_cloud_free(h);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.path().join("smoke");
    let status = Command::new(cc)
        .arg(&c_src)
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "13 1\n");
}
