import type { Screen, TaskCard } from "./types.js";

/** Thin client over the read endpoints; all calls are idempotent GETs. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      throw new Error(`${path} -> HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listTasks(): Promise<TaskCard[]> {
    return this.getJson<TaskCard[]>("/tasks");
  }

  screensForTask(taskId: string): Promise<Screen[]> {
    return this.getJson<Screen[]>(`/tasks/${encodeURIComponent(taskId)}/screens`);
  }
}
