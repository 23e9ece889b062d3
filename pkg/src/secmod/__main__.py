from secmod.cli import main

main()
