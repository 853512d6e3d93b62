// Cypher syntax highlighting. The output is HTML whose text content equals
// the input exactly; only span wrappers are added.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const KEYWORDS = new Set([
  "match",
  "where",
  "return",
  "order",
  "by",
  "limit",
  "distinct",
  "as",
  "and",
  "or",
  "not",
  "exists",
  "count",
  "asc",
  "desc",
]);

// Strings first so nothing inside them is treated as a keyword, then word
// tokens and numbers. Anything else passes through escaped but unwrapped.
const TOKEN = /"(?:[^"\\]|\\.)*"|[A-Za-z_][A-Za-z0-9_]*|\d+(?:\.\d+)?/g;

export function highlightCypher(text: string): string {
  let html = "";
  let last = 0;
  for (const match of text.matchAll(TOKEN)) {
    const start = match.index ?? 0;
    html += escapeHtml(text.slice(last, start));
    const token = match[0];
    if (token.startsWith('"')) {
      html += `<span class="cy-string">${escapeHtml(token)}</span>`;
    } else if (KEYWORDS.has(token.toLowerCase())) {
      html += `<span class="cy-keyword">${escapeHtml(token)}</span>`;
    } else if (/^\d/.test(token)) {
      html += `<span class="cy-number">${escapeHtml(token)}</span>`;
    } else {
      html += escapeHtml(token);
    }
    last = start + token.length;
  }
  html += escapeHtml(text.slice(last));
  return html;
}
