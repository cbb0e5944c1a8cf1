// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Report serialization: versioned JSON with fixed key order and floats
//! rounded to six significant digits.

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Rounds to six significant digits. Non-finite values pass through and
/// negative zero becomes zero.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

pub fn sig6_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig6)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Analysis(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// CSV with a header row taken from the record's field names.
pub fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::Analysis(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Analysis(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
