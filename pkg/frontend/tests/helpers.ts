import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

/** Stub fetch serving the pinned API fixture bodies. */
export function installFixtureFetch(routes: Record<string, unknown>): string[] {
  const calls: string[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL) => {
    const path = String(input);
    calls.push(path);
    if (path in routes) {
      return new Response(JSON.stringify(routes[path]), {
        status: 200,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response("not found", { status: 404 });
  }) as typeof fetch;
  return calls;
}

/** Pointer-only interaction: buttons receive a real PointerEvent click. */
export function pointerPress(target: Element): void {
  const Ctor = (globalThis as { PointerEvent?: typeof MouseEvent }).PointerEvent ?? MouseEvent;
  target.dispatchEvent(new Ctor("click", { bubbles: true, cancelable: true }));
}

export function query<T extends Element>(root: ParentNode, selector: string): T {
  const node = root.querySelector(selector);
  if (!node) {
    throw new Error(`missing element: ${selector}`);
  }
  return node as T;
}

export function finishSegment(video: HTMLVideoElement): void {
  video.dispatchEvent(new Event("ended"));
}

export function failSegment(video: HTMLVideoElement): void {
  video.dispatchEvent(new Event("error"));
}

export function flush(): Promise<void> {
  return new Promise(resolve => setTimeout(resolve, 0));
}
