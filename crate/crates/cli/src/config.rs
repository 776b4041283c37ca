//! Experiment manifests: line-oriented `key = value` files with a `[global]`
//! section and one section per command.
//!
//! Manifest entries are spliced into the argument list as long flags, so a
//! flag given on the command line always wins over the file.

use anyhow::{bail, Context, Result};
use ini::Ini;
use sha2::{Digest, Sha256};
use std::path::Path;

pub const COMMANDS: [&str; 7] = ["index", "norm", "scaling", "verify", "besov", "pde", "embed"];

/// Arguments that never influence results and so stay out of the hash.
const UNHASHED: [&str; 2] = ["out", "config"];

fn flag_value(args: &[String], name: &str) -> Option<String> {
    let long = format!("--{name}");
    let eq = format!("--{name}=");
    for (i, a) in args.iter().enumerate() {
        if *a == long {
            return args.get(i + 1).cloned();
        }
        if let Some(v) = a.strip_prefix(&eq) {
            return Some(v.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], name: &str) -> bool {
    let long = format!("--{name}");
    let eq = format!("--{name}=");
    args.iter().any(|a| *a == long || a.starts_with(&eq))
}

/// Expands `--config FILE` into explicit flags.
pub fn merge_manifest(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = flag_value(&args, "config") else {
        return Ok(args);
    };
    let ini = Ini::load_from_file(Path::new(&path))
        .with_context(|| format!("reading config '{path}'"))?;
    let mut command = args.iter().skip(1).find(|a| COMMANDS.contains(&a.as_str())).cloned();
    if command.is_none() {
        if let Some(c) = ini.section(Some("global")).and_then(|s| s.get("command")) {
            if !COMMANDS.contains(&c) {
                bail!("config '{path}': unknown command '{c}'");
            }
            args.insert(1, c.to_string());
            command = Some(c.to_string());
        }
    }
    let known: Vec<&str> = COMMANDS.iter().copied().chain(["global"]).collect();
    for (sec, _) in ini.iter() {
        match sec {
            Some(s) if known.contains(&s) => {}
            Some(s) => bail!("config '{path}': unknown section [{s}]"),
            None => {}
        }
    }
    let mut extra = Vec::new();
    let sections = [None, Some("global".to_string()), command.clone()];
    for sec in sections.iter() {
        let Some(props) = ini.section(sec.as_deref()) else { continue };
        for (k, v) in props.iter() {
            let key = k.trim().replace('_', "-");
            if key == "command" || has_flag(&args, &key) || has_flag(&extra, &key) {
                continue;
            }
            match v.trim() {
                "true" => extra.push(format!("--{key}")),
                "false" => {}
                v => extra.push(format!("--{key}={v}")),
            }
        }
    }
    args.extend(extra);
    Ok(args)
}

/// SHA-256 over the effective arguments of the command, sorted by name.
pub fn config_hash(matches: &clap::ArgMatches) -> String {
    let mut lines = Vec::new();
    collect(matches, "", &mut lines);
    lines.sort();
    let mut h = Sha256::new();
    for l in &lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

fn collect(m: &clap::ArgMatches, prefix: &str, out: &mut Vec<String>) {
    for id in m.ids() {
        let name = id.as_str();
        // derive-generated groups are named after their struct and list
        // member ids in command-line order
        if UNHASHED.contains(&name) || name.starts_with(|c: char| c.is_ascii_uppercase()) {
            continue;
        }
        let vals = match m.try_get_raw(name) {
            Ok(Some(raw)) => raw.map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>(),
            _ => continue,
        };
        out.push(format!("{prefix}{name}={}", vals.join(",")));
    }
    if let Some((cmd, sub)) = m.subcommand() {
        out.push(format!("command={cmd}"));
        collect(sub, &format!("{cmd}."), out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn manifest_fills_missing_flags_only() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[global]\ncommand = index\nseed = 7\n[index]\np = inf\nq = 1\n[norm]\np = 2").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let out = merge_manifest(argv(&format!("dilab --config {path} --q 2"))).unwrap();
        assert_eq!(out[1], "index");
        assert!(out.contains(&"--seed=7".to_string()));
        assert!(out.contains(&"--p=inf".to_string()));
        assert!(!out.iter().any(|a| a == "--q=1"));
        assert!(!out.iter().any(|a| a == "--p=2"));
    }

    #[test]
    fn unknown_section_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[plot]\nx = 1").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        assert!(merge_manifest(argv(&format!("dilab index --config {path}"))).is_err());
    }
}
