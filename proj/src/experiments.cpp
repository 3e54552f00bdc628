namespace covertlink {
}
