//! Reading input documents and fixture directories.
//!
//! Every document is JSON; the file extension selects the schema:
//! `.category`, `.group`, `.dfa`, `.regex` and `.filter`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use topos_core::fincat::format::CategoryFile;
use topos_core::fincat::FiniteCategory;
use topos_core::filters::FilterFile;
use topos_core::normalize::{FiniteGroup, GroupFile};
use topos_core::words::{parse_regex, Alphabet, Dfa, DfaFile, Regex};

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path.display(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path.display(), e))
}

/// File stem, used as the display name of whatever the file defines.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_category(path: &Path) -> Result<FiniteCategory, CliError> {
    let raw: CategoryFile = read_json(path)?;
    FiniteCategory::from_file(&raw).map_err(|e| CliError::input(path.display(), e))
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, CliError> {
    let raw: GroupFile = read_json(path)?;
    FiniteGroup::from_file(stem(path), &raw).map_err(|e| CliError::input(path.display(), e))
}

pub fn load_dfa(path: &Path) -> Result<Dfa, CliError> {
    let raw: DfaFile = read_json(path)?;
    Dfa::from_file(&raw).map_err(|e| CliError::input(path.display(), e))
}

pub fn load_filter(path: &Path) -> Result<FilterFile, CliError> {
    read_json(path)
}

pub fn compile_regex(src: &str, alphabet: &str) -> Result<(Alphabet, Regex), CliError> {
    let alphabet = Alphabet::new(alphabet).map_err(|e| CliError::input("--alphabet", e))?;
    let r = parse_regex(src, &alphabet).map_err(|e| CliError::input(format!("regex `{src}`"), e))?;
    Ok((alphabet, r))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegexFile {
    alphabet: String,
    regex: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterFixtureFile {
    /// Category file, relative to the fixture directory.
    category: String,
    members: FilterFile,
    /// Whether the selection is meant to be an internal filter.
    expect_filter: bool,
}

pub struct RegexFixture {
    pub name: String,
    pub source: String,
    pub alphabet: Alphabet,
    pub regex: Regex,
}

pub struct FilterFixture {
    pub name: String,
    pub site_name: String,
    pub site: FiniteCategory,
    pub members: FilterFile,
    pub expect_filter: bool,
}

/// Everything found in a user fixture directory, each list sorted by file name.
#[derive(Default)]
pub struct Fixtures {
    pub categories: Vec<(String, FiniteCategory)>,
    pub groups: Vec<FiniteGroup>,
    pub dfas: Vec<(String, Dfa)>,
    pub regexes: Vec<RegexFixture>,
    pub filters: Vec<FilterFixture>,
}

impl Fixtures {
    /// Parses every recognized file in `dir`; any malformed one is an error.
    /// Files with other extensions are ignored.
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let entries = fs::read_dir(dir).map_err(|e| CliError::input(dir.display(), e))?;
        let mut paths: Vec<PathBuf> = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| CliError::input(dir.display(), e))?;
            paths.push(entry.path());
        }
        paths.sort();
        let mut out = Fixtures::default();
        for path in paths {
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            match ext {
                "category" => out.categories.push((stem(&path), load_category(&path)?)),
                "group" => out.groups.push(load_group(&path)?),
                "dfa" => out.dfas.push((stem(&path), load_dfa(&path)?)),
                "regex" => {
                    let raw: RegexFile = read_json(&path)?;
                    let (alphabet, regex) =
                        compile_regex(&raw.regex, &raw.alphabet).map_err(|e| CliError::input(path.display(), e))?;
                    out.regexes.push(RegexFixture {
                        name: stem(&path),
                        source: raw.regex,
                        alphabet,
                        regex,
                    });
                }
                "filter" => {
                    let raw: FilterFixtureFile = read_json(&path)?;
                    let site_path = dir.join(&raw.category);
                    out.filters.push(FilterFixture {
                        name: stem(&path),
                        site_name: stem(&site_path),
                        site: load_category(&site_path)?,
                        members: raw.members,
                        expect_filter: raw.expect_filter,
                    });
                }
                _ => {}
            }
        }
        Ok(out)
    }
}
