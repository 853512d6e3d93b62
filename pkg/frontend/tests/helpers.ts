import { readFileSync } from "node:fs";

export function loadFixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

// Invert the escaping the renderers apply: drop tags, then decode entities.
// &amp; goes last so double-escaped text survives the round trip.
export function textOf(html: string): string {
  return html
    .replace(/<[^>]*>/g, "")
    .replace(/&quot;/g, '"')
    .replace(/&#39;/g, "'")
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
}

export function countOf(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}
