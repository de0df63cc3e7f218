use std::ptr;

use modbc_ffi::*;

const TWO_TRIANGLES: &[u8] = b"n 0 0\nn 1 0\nn 2 0\nn 3 1\nn 4 1\nn 5 1\n\
e 0 1 1\ne 1 2 1\ne 0 2 1\ne 3 4 1\ne 4 5 1\ne 3 5 1\ne 2 3 1\n";

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let n = unsafe { modbc_last_error(buf.as_mut_ptr().cast(), buf.len()) };
    String::from_utf8_lossy(&buf[..n.min(255)]).into_owned()
}

fn parse(text: &[u8]) -> *mut ModbcGraph {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { modbc_graph_parse(text.as_ptr(), text.len(), &mut g) },
        ModbcStatus::Ok
    );
    g
}

#[test]
fn exact_modular_and_coarse_on_two_triangles() {
    let g = parse(TWO_TRIANGLES);
    unsafe {
        assert_eq!(modbc_graph_node_count(g), 6);
        assert_eq!(modbc_graph_module_count(g), 2);
        let mut bc = [0.0; 6];
        assert_eq!(modbc_exact_bc(g, bc.as_mut_ptr(), 6), ModbcStatus::Ok);
        assert_eq!(bc, [0.0, 0.0, 12.0, 12.0, 0.0, 0.0]);

        let mut oracle = [0.0; 6];
        assert_eq!(modbc_oracle_bc(g, oracle.as_mut_ptr(), 6), ModbcStatus::Ok);
        assert_eq!(oracle, bc);

        let (mut lc, mut gc, mut top) = ([0.0; 6], [0.0; 6], usize::MAX);
        let s = modbc_modular(
            g,
            lc.as_mut_ptr(),
            ptr::null_mut(),
            gc.as_mut_ptr(),
            6,
            &mut top,
        );
        assert_eq!(s, ModbcStatus::Ok);
        assert_eq!(gc, bc);
        assert_eq!(lc, [0.0; 6]);
        assert_eq!(top, 2);

        let mut ec = [0.0; 6];
        let s = modbc_coarse(
            g,
            false,
            ptr::null_mut(),
            ec.as_mut_ptr(),
            ptr::null_mut(),
            6,
            ptr::null_mut(),
        );
        assert_eq!(s, ModbcStatus::Ok);
        assert_eq!(ec, [0.0, 0.0, 9.0, 9.0, 0.0, 0.0]);
        assert_eq!(modbc_validate(g), ModbcStatus::Ok);
        modbc_graph_free(g);
    }
}

#[test]
fn from_edges_and_generate() {
    let modules = [0usize, 0, 1];
    let (us, vs, ws) = ([0usize, 1], [1usize, 2], [1.0, 2.0]);
    let mut g = ptr::null_mut();
    unsafe {
        let s = modbc_graph_from_edges(
            3,
            modules.as_ptr(),
            2,
            us.as_ptr(),
            vs.as_ptr(),
            ws.as_ptr(),
            &mut g,
        );
        assert_eq!(s, ModbcStatus::Ok);
        let mut bc = [0.0; 3];
        assert_eq!(modbc_exact_bc(g, bc.as_mut_ptr(), 3), ModbcStatus::Ok);
        assert_eq!(bc, [0.0, 2.0, 0.0]);
        modbc_graph_free(g);

        let mut h = ptr::null_mut();
        assert_eq!(
            modbc_graph_generate(200, 0, 5, true, &mut h),
            ModbcStatus::Ok
        );
        assert_eq!(modbc_graph_module_count(h), 14);
        assert_eq!(modbc_validate(h), ModbcStatus::Ok);
        let mut exact = vec![0.0; 200];
        let mut gc = vec![0.0; 200];
        modbc_exact_bc(h, exact.as_mut_ptr(), 200);
        modbc_modular(
            h,
            ptr::null_mut(),
            ptr::null_mut(),
            gc.as_mut_ptr(),
            200,
            ptr::null_mut(),
        );
        let scale = exact.iter().fold(1.0_f64, |m, x| m.max(*x));
        assert!(exact
            .iter()
            .zip(&gc)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * scale));
        modbc_graph_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = b"n 0 0\nn 1 0\ne 0 1 -1\n";
        assert_eq!(
            modbc_graph_parse(bad.as_ptr(), bad.len(), &mut g),
            ModbcStatus::InvalidGraph
        );
        assert!(g.is_null());
        assert!(last_error().contains("weight"), "{}", last_error());

        assert_eq!(
            modbc_exact_bc(ptr::null(), ptr::null_mut(), 0),
            ModbcStatus::NullPointer
        );
        assert_eq!(modbc_graph_node_count(ptr::null()), 0);
        modbc_graph_free(ptr::null_mut());

        let g = parse(TWO_TRIANGLES);
        let mut small = [0.0; 3];
        assert_eq!(
            modbc_exact_bc(g, small.as_mut_ptr(), 3),
            ModbcStatus::BufferTooSmall
        );
        assert!(last_error().contains("need 6"));
        assert_eq!(
            modbc_exact_bc(g, ptr::null_mut(), 6),
            ModbcStatus::NullPointer
        );
        modbc_graph_free(g);

        let mut big = ptr::null_mut();
        assert_eq!(
            modbc_graph_generate(100, 0, 1, false, &mut big),
            ModbcStatus::Ok
        );
        let mut buf = vec![0.0; 100];
        assert_eq!(
            modbc_oracle_bc(big, buf.as_mut_ptr(), 100),
            ModbcStatus::GraphTooLarge
        );
        let mut tiny = ptr::null_mut();
        assert_eq!(
            modbc_graph_generate(2, 0, 1, false, &mut tiny),
            ModbcStatus::InvalidArgument
        );
        modbc_graph_free(big);

        let mut open = ptr::null_mut();
        assert_eq!(
            modbc_graph_generate(100, 0, 7, false, &mut open),
            ModbcStatus::Ok
        );
        assert_eq!(modbc_validate(open), ModbcStatus::PreconditionViolated);
        assert!(last_error().contains("leaving the module"));
        modbc_graph_free(open);
    }
}

#[test]
fn truncated_error_buffer_is_terminated() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = b"x\n";
        modbc_graph_parse(bad.as_ptr(), bad.len(), &mut g);
        let mut buf = [0x7fu8; 4];
        let full = modbc_last_error(buf.as_mut_ptr().cast(), buf.len());
        assert!(full > 3);
        assert_eq!(buf[3], 0);
        assert_eq!(modbc_last_error(ptr::null_mut(), 0), full);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/modbc.h");
    for name in [
        "modbc_last_error",
        "modbc_graph_parse",
        "modbc_graph_from_edges",
        "modbc_graph_generate",
        "modbc_graph_free",
        "modbc_graph_node_count",
        "modbc_graph_module_count",
        "modbc_exact_bc",
        "modbc_oracle_bc",
        "modbc_validate",
        "modbc_modular",
        "modbc_coarse",
        "MODBC_STATUS_BUFFER_TOO_SMALL",
        "typedef struct ModbcGraph ModbcGraph",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
